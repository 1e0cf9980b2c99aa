use crate::algorithms::{Optimizer, OptimizerState};
use crate::error::{Error, Result};
use crate::problem::Evaluator;
use crate::sampling::{RandomSource, RngStream};

/// Picks one branch per iteration by a uniform draw against the cumulative
/// probabilities and steps it on the whole shared population.
///
/// The selection draw comes from a private stream derived in
/// [`Optimizer::attach_streams`], so the branches see exactly the random
/// numbers they would see when run alone. Without attached streams the draw
/// falls back to the step's own source.
#[derive(Debug)]
pub struct ParallelSwitch {
    branches: Vec<Box<dyn Optimizer>>,
    cumulative: Vec<f64>,
    last_live: usize,
    selector: Option<RngStream>,
    counts: Vec<u64>,
}

impl ParallelSwitch {
    pub fn new(branches: Vec<(Box<dyn Optimizer>, f64)>) -> Result<Self> {
        if branches.is_empty() {
            return Err(Error::invalid("parallel switch needs at least one branch"));
        }
        let probabilities: Vec<f64> = branches.iter().map(|b| b.1).collect();
        check_probabilities(&probabilities)?;
        let mut acc = 0.0;
        let cumulative = probabilities
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        let last_live = probabilities.iter().rposition(|&p| p > 0.0).unwrap_or(0);
        let counts = vec![0; branches.len()];
        Ok(Self {
            branches: branches.into_iter().map(|b| b.0).collect(),
            cumulative,
            last_live,
            selector: None,
            counts,
        })
    }

    /// How often each branch has been stepped.
    pub fn selection_counts(&self) -> &[u64] {
        &self.counts
    }

    fn select(&self, u: f64) -> usize {
        // Rounding can leave the top of [0, 1) uncovered.
        self.cumulative.iter().position(|&c| u < c).unwrap_or(self.last_live)
    }
}

pub(crate) fn check_probabilities(probabilities: &[f64]) -> Result<()> {
    if probabilities.iter().any(|p| !(*p >= 0.0 && p.is_finite())) {
        return Err(Error::invalid(format!("switch probabilities must be non-negative, got {probabilities:?}")));
    }
    let sum: f64 = probabilities.iter().sum();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(Error::invalid(format!("switch probabilities sum to {sum}, expected 1")));
    }
    Ok(())
}

impl Optimizer for ParallelSwitch {
    fn name(&self) -> String {
        let names: Vec<String> = self.branches.iter().map(|b| b.name()).collect();
        format!("switch({})", names.join(","))
    }

    fn min_population(&self) -> usize {
        self.branches.iter().map(|b| b.min_population()).max().unwrap_or(1)
    }

    fn attach_streams(&mut self, parent: &RngStream) {
        self.selector = Some(parent.child(0));
        for (i, branch) in self.branches.iter_mut().enumerate() {
            branch.attach_streams(&parent.child(i as u64 + 1));
        }
    }

    fn prepare(&mut self, state: &mut OptimizerState) -> Result<()> {
        self.branches.iter_mut().try_for_each(|b| b.prepare(state))
    }

    fn step(
        &mut self,
        state: &mut OptimizerState,
        evaluator: &mut Evaluator<'_>,
        rng: &mut dyn RandomSource,
    ) -> Result<u64> {
        let u = match self.selector.as_mut() {
            Some(s) => s.uniform01(),
            None => rng.uniform01(),
        };
        let chosen = self.select(u);
        self.counts[chosen] += 1;
        self.branches[chosen].step(state, evaluator, rng)
    }
}
