//! Hybrid compositions of the base optimizers.
//!
//! * sequential: stages run one after another on the same population, each
//!   with a share of the budget ([`run_sequential`]);
//! * parallel switch: one branch, picked at random, steps the whole
//!   population each iteration ([`ParallelSwitch`]);
//! * parallel split: fixed subpopulations under different optimizers with a
//!   periodic rank-and-redeal merge ([`ParallelSplit`]).
//!
//! Both parallel structures implement [`Optimizer`] and therefore nest: a
//! switch branch, split group or sequential stage may itself be a parallel
//! hybrid. Nesting is limited to [`MAX_DEPTH`] levels, and a sequential spec
//! may only appear at the top (nested sequential stages are flattened).

mod combinations;
mod sequential;
mod split;
mod switch;

use serde::{Deserialize, Serialize};

pub use combinations::combination_count;
pub use sequential::{run_sequential, run_sequential_observed, stage_limits};
pub use split::{merge_partition, ParallelSplit, MIN_GROUP_SIZE};
pub use switch::ParallelSwitch;

use crate::algorithms::{AlgorithmConfig, Optimizer};
use crate::error::{Error, Result};
use crate::problem::{PenaltyConfig, Problem};
use crate::runner::{run_observed, Budget, Observer, RunRecord};
use crate::sampling::RngStream;

/// Deepest allowed nesting of hybrid specs, counting the outermost one.
pub const MAX_DEPTH: usize = 3;

/// Either a base algorithm or a nested hybrid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Component {
    Algorithm(AlgorithmConfig),
    Hybrid(Box<HybridSpec>),
}

impl Component {
    pub fn build(&self) -> Result<Box<dyn Optimizer>> {
        match self {
            Component::Algorithm(cfg) => cfg.build(),
            Component::Hybrid(spec) => spec.build(),
        }
    }

    fn validate_at(&self, depth: usize) -> Result<()> {
        match self {
            Component::Algorithm(cfg) => cfg.validate(),
            Component::Hybrid(spec) => {
                if matches!(**spec, HybridSpec::Sequential { .. }) {
                    return Err(Error::invalid("a sequential hybrid can only be nested in another sequential one"));
                }
                spec.validate_at(depth + 1)
            }
        }
    }
}

impl From<AlgorithmConfig> for Component {
    fn from(cfg: AlgorithmConfig) -> Self {
        Component::Algorithm(cfg)
    }
}

impl From<HybridSpec> for Component {
    fn from(spec: HybridSpec) -> Self {
        Component::Hybrid(Box::new(spec))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stage {
    #[serde(flatten)]
    pub component: Component,
    /// Fraction of the total budget, in `(0, 1]`.
    pub share: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    #[serde(flatten)]
    pub component: Component,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitGroup {
    #[serde(flatten)]
    pub component: Component,
    pub size: usize,
}

/// Declarative hybrid description, as written in experiment configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "structure", rename_all = "snake_case")]
pub enum HybridSpec {
    Sequential { stages: Vec<Stage> },
    ParallelSwitch { branches: Vec<Branch> },
    ParallelSplit { groups: Vec<SplitGroup>, merge_period: u64 },
}

impl HybridSpec {
    pub fn sequential(stages: impl IntoIterator<Item = (Component, f64)>) -> Self {
        HybridSpec::Sequential {
            stages: stages.into_iter().map(|(component, share)| Stage { component, share }).collect(),
        }
    }

    pub fn parallel_switch(branches: impl IntoIterator<Item = (Component, f64)>) -> Self {
        HybridSpec::ParallelSwitch {
            branches: branches.into_iter().map(|(component, probability)| Branch { component, probability }).collect(),
        }
    }

    pub fn parallel_split(groups: impl IntoIterator<Item = (Component, usize)>, merge_period: u64) -> Self {
        HybridSpec::ParallelSplit {
            groups: groups.into_iter().map(|(component, size)| SplitGroup { component, size }).collect(),
            merge_period,
        }
    }

    pub fn structure(&self) -> &'static str {
        match self {
            HybridSpec::Sequential { .. } => "sequential",
            HybridSpec::ParallelSwitch { .. } => "parallel_switch",
            HybridSpec::ParallelSplit { .. } => "parallel_split",
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_at(1)
    }

    fn validate_at(&self, depth: usize) -> Result<()> {
        if depth > MAX_DEPTH {
            return Err(Error::invalid(format!("hybrid nesting deeper than {MAX_DEPTH} levels")));
        }
        match self {
            HybridSpec::Sequential { .. } => {
                let stages = self.flattened_stages()?;
                sequential::check_shares(&stages.iter().map(|s| s.1).collect::<Vec<_>>())?;
                stages.iter().try_for_each(|(c, _)| c.validate_at(depth))
            }
            HybridSpec::ParallelSwitch { branches } => {
                if branches.is_empty() {
                    return Err(Error::invalid("parallel switch needs at least one branch"));
                }
                switch::check_probabilities(&branches.iter().map(|b| b.probability).collect::<Vec<_>>())?;
                branches.iter().try_for_each(|b| b.component.validate_at(depth))
            }
            HybridSpec::ParallelSplit { groups, .. } => {
                groups.iter().try_for_each(|g| g.component.validate_at(depth))?;
                // group sizes and merge period are checked by the constructor
                self.build().map(|_| ())
            }
        }
    }

    /// Stages with nested sequential specs expanded in place, their shares
    /// scaled by the enclosing stage's share.
    pub fn flattened_stages(&self) -> Result<Vec<(Component, f64)>> {
        let HybridSpec::Sequential { stages } = self else {
            return Err(Error::invalid(format!("{} hybrid has no stages", self.structure())));
        };
        let mut out = Vec::new();
        for stage in stages {
            match &stage.component {
                Component::Hybrid(inner) if matches!(**inner, HybridSpec::Sequential { .. }) => {
                    for (c, s) in inner.flattened_stages()? {
                        out.push((c, s * stage.share));
                    }
                }
                c => out.push((c.clone(), stage.share)),
            }
        }
        Ok(out)
    }

    /// Builds a parallel hybrid. Sequential specs are not optimizers in their
    /// own right and must go through [`HybridSpec::run`].
    pub fn build(&self) -> Result<Box<dyn Optimizer>> {
        match self {
            HybridSpec::Sequential { .. } => {
                Err(Error::invalid("a sequential hybrid cannot be stepped; run it with HybridSpec::run"))
            }
            HybridSpec::ParallelSwitch { branches } => {
                let built =
                    branches.iter().map(|b| Ok((b.component.build()?, b.probability))).collect::<Result<Vec<_>>>()?;
                Ok(Box::new(ParallelSwitch::new(built)?))
            }
            HybridSpec::ParallelSplit { groups, merge_period } => {
                let built = groups.iter().map(|g| Ok((g.component.build()?, g.size))).collect::<Result<Vec<_>>>()?;
                Ok(Box::new(ParallelSplit::new(built, *merge_period)?))
            }
        }
    }

    /// Runs the hybrid from a fresh population.
    pub fn run(
        &self,
        problem: &Problem,
        population: usize,
        budget: Budget,
        penalty: PenaltyConfig,
        rng: &mut RngStream,
    ) -> Result<RunRecord> {
        self.run_observed(problem, population, budget, penalty, rng, &mut |_, _| {})
    }

    /// [`HybridSpec::run`] with a callback after every step.
    pub fn run_observed(
        &self,
        problem: &Problem,
        population: usize,
        budget: Budget,
        penalty: PenaltyConfig,
        rng: &mut RngStream,
        observer: &mut Observer<'_>,
    ) -> Result<RunRecord> {
        self.validate()?;
        match self {
            HybridSpec::Sequential { .. } => {
                let stages = self
                    .flattened_stages()?
                    .into_iter()
                    .map(|(c, share)| Ok((c.build()?, share)))
                    .collect::<Result<Vec<_>>>()?;
                run_sequential_observed(stages, problem, population, budget, penalty, rng, observer)
            }
            _ => run_observed(self.build()?.as_mut(), problem, population, budget, penalty, rng, observer),
        }
    }
}
