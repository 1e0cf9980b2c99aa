use crate::algorithms::{Optimizer, OptimizerState};
use crate::error::{Error, Result};
use crate::problem::Evaluator;
use crate::sampling::{RandomSource, RngStream};

/// Smallest subpopulation a split accepts.
pub const MIN_GROUP_SIZE: usize = 3;

#[derive(Debug)]
struct Group {
    optimizer: Box<dyn Optimizer>,
    size: usize,
    state: Option<OptimizerState>,
    stream: Option<RngStream>,
}

/// Runs each subpopulation under its own optimizer and periodically pools,
/// ranks and redeals all agents.
///
/// The shared population is laid out group by group. Group 0 draws from the
/// step's random source and group `g > 0` from its own stream derived in
/// [`Optimizer::attach_streams`]. Each group keeps its own best solution and
/// schedule clocks between merges; at a merge every group restarts from the
/// shared best and its optimizer's `prepare` is rerun on the new members.
#[derive(Debug)]
pub struct ParallelSplit {
    groups: Vec<Group>,
    merge_period: u64,
    since_merge: u64,
}

impl ParallelSplit {
    pub fn new(groups: Vec<(Box<dyn Optimizer>, usize)>, merge_period: u64) -> Result<Self> {
        if groups.is_empty() {
            return Err(Error::invalid("parallel split needs at least one group"));
        }
        if merge_period == 0 {
            return Err(Error::invalid("merge_period must be at least 1"));
        }
        for (optimizer, size) in &groups {
            let min = optimizer.min_population().max(MIN_GROUP_SIZE);
            if *size < min {
                return Err(Error::invalid(format!(
                    "subpopulation of {size} for {} is below the minimum of {min}",
                    optimizer.name()
                )));
            }
        }
        let groups =
            groups.into_iter().map(|(optimizer, size)| Group { optimizer, size, state: None, stream: None }).collect();
        Ok(Self { groups, merge_period, since_merge: 0 })
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.size).collect()
    }

    fn total(&self) -> usize {
        self.groups.iter().map(|g| g.size).sum()
    }

    /// Copies the group members back into the shared population.
    fn write_back(&self, state: &mut OptimizerState) {
        state.agents = self
            .groups
            .iter()
            .flat_map(|g| g.state.as_ref().map_or(&[][..], |s| &s.agents[..]).iter().cloned())
            .collect();
    }

    fn merge(&mut self, state: &mut OptimizerState) -> Result<()> {
        let fitness: Vec<f64> = state.agents.iter().map(|a| a.fitness()).collect();
        let partition = merge_partition(&fitness, &self.sizes())?;
        for (group, members) in self.groups.iter_mut().zip(partition) {
            let sub = group.state.as_mut().expect("merge runs after prepare");
            sub.agents = members.iter().map(|&i| state.agents[i].clone()).collect();
            sub.global_best = state.global_best.clone();
            group.optimizer.prepare(sub)?;
        }
        self.write_back(state);
        Ok(())
    }
}

/// Redeal of a pooled population: agents are ranked by fitness (stable, so
/// equal fitness keeps pool order) and dealt round-robin over the groups,
/// skipping groups that are already full. Returns the pool indices assigned
/// to each group.
pub fn merge_partition(fitness: &[f64], sizes: &[usize]) -> Result<Vec<Vec<usize>>> {
    if sizes.iter().sum::<usize>() != fitness.len() {
        return Err(Error::invalid(format!(
            "subpopulation sizes {sizes:?} do not sum to the population of {}",
            fitness.len()
        )));
    }
    let mut ranked: Vec<usize> = (0..fitness.len()).collect();
    ranked.sort_by(|&a, &b| fitness[a].total_cmp(&fitness[b]));
    let mut out: Vec<Vec<usize>> = sizes.iter().map(|&s| Vec::with_capacity(s)).collect();
    let mut g = 0;
    for idx in ranked {
        while out[g].len() == sizes[g] {
            g = (g + 1) % sizes.len();
        }
        out[g].push(idx);
        g = (g + 1) % sizes.len();
    }
    Ok(out)
}

impl Optimizer for ParallelSplit {
    fn name(&self) -> String {
        let names: Vec<String> = self.groups.iter().map(|g| format!("{}:{}", g.optimizer.name(), g.size)).collect();
        format!("split({})", names.join(","))
    }

    fn min_population(&self) -> usize {
        self.total()
    }

    fn attach_streams(&mut self, parent: &RngStream) {
        for (g, group) in self.groups.iter_mut().enumerate() {
            let own = parent.child(g as u64);
            group.optimizer.attach_streams(&own);
            group.stream = (g > 0).then_some(own);
        }
    }

    fn prepare(&mut self, state: &mut OptimizerState) -> Result<()> {
        if state.len() != self.total() {
            return Err(Error::invalid(format!(
                "subpopulation sizes {:?} do not sum to the population of {}",
                self.sizes(),
                state.len()
            )));
        }
        let mut offset = 0;
        for group in &mut self.groups {
            let mut sub = OptimizerState::from_agents(state.agents[offset..offset + group.size].to_vec())?;
            sub.global_best = state.global_best.clone();
            group.optimizer.prepare(&mut sub)?;
            group.state = Some(sub);
            offset += group.size;
        }
        self.since_merge = 0;
        self.write_back(state);
        Ok(())
    }

    fn step(
        &mut self,
        state: &mut OptimizerState,
        evaluator: &mut Evaluator<'_>,
        rng: &mut dyn RandomSource,
    ) -> Result<u64> {
        if state.len() != self.total() || self.groups.iter().any(|g| g.state.is_none()) {
            return Err(Error::invalid("parallel split stepped before prepare"));
        }
        let mut generated = 0;
        let mut offset = 0;
        for (g, group) in self.groups.iter_mut().enumerate() {
            let sub = group.state.as_mut().expect("checked above");
            // Another optimizer may have moved the shared agents (nested use).
            sub.agents.clone_from_slice(&state.agents[offset..offset + group.size]);
            offset += group.size;
            let source: &mut dyn RandomSource = if g == 0 {
                &mut *rng
            } else {
                group.stream.as_mut().ok_or_else(|| Error::invalid("parallel split streams not attached"))?
            };
            generated += group.optimizer.step(sub, evaluator, source)?;
        }
        for group in &self.groups {
            state.offer(&group.state.as_ref().expect("checked above").global_best);
        }
        self.write_back(state);
        state.iteration += 1;

        self.since_merge += 1;
        if self.since_merge == self.merge_period {
            self.since_merge = 0;
            if self.groups.len() > 1 {
                self.merge(state)?;
            }
        }
        Ok(generated)
    }
}
