//! The six population-based optimizers and the state they share.
//!
//! Every optimizer works on an explicit [`OptimizerState`]: a population is
//! created and evaluated by [`initialize`], the optimizer fills in its
//! per-agent extras in [`Optimizer::prepare`], and each call to
//! [`Optimizer::step`] performs one iteration. Steps draw every random number
//! from the [`RandomSource`] they are handed and keep no hidden state, so a
//! seeded stream reproduces a run bit for bit.

mod apso;
mod bat;
mod cuckoo;
mod firefly;
mod fpa;
mod pso;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use apso::{apso_alpha, Apso, ApsoParams};
pub use bat::{bat_schedules, Bat, BatParams};
pub use cuckoo::{Cuckoo, CuckooParams};
pub use firefly::{attraction_move, firefly_alpha, Firefly, FireflyParams};
pub use fpa::{Fpa, FpaParams};
pub use pso::{Pso, PsoParams};

use crate::error::{Error, Result};
use crate::problem::{init_population, EvaluatedSolution, Evaluator};
use crate::sampling::{RandomSource, RngStream};

/// Canonical algorithm identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgorithmKind {
    Pso,
    Apso,
    Bat,
    Firefly,
    Cuckoo,
    Fpa,
}

impl AlgorithmKind {
    pub const ALL: [AlgorithmKind; 6] = [
        AlgorithmKind::Pso,
        AlgorithmKind::Apso,
        AlgorithmKind::Bat,
        AlgorithmKind::Firefly,
        AlgorithmKind::Cuckoo,
        AlgorithmKind::Fpa,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AlgorithmKind::Pso => "pso",
            AlgorithmKind::Apso => "apso",
            AlgorithmKind::Bat => "bat",
            AlgorithmKind::Firefly => "firefly",
            AlgorithmKind::Cuckoo => "cuckoo",
            AlgorithmKind::Fpa => "fpa",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == name)
            .ok_or_else(|| Error::invalid(format!("unknown algorithm `{name}`")))
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for AlgorithmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One member of the population.
///
/// `velocity` is used by PSO and the bat algorithm, `personal_best` by PSO,
/// `loudness`/`pulse_rate` by the bat algorithm. Other optimizers ignore them.
#[derive(Debug, Clone, PartialEq)]
pub struct Agent {
    pub solution: EvaluatedSolution,
    pub velocity: Vec<f64>,
    pub personal_best: Option<EvaluatedSolution>,
    pub loudness: f64,
    pub pulse_rate: f64,
}

impl Agent {
    pub fn new(solution: EvaluatedSolution) -> Self {
        Self { solution, velocity: Vec::new(), personal_best: None, loudness: 0.0, pulse_rate: 0.0 }
    }

    pub fn position(&self) -> &[f64] {
        &self.solution.position
    }

    pub fn fitness(&self) -> f64 {
        self.solution.fitness
    }

    /// Clears every algorithm-specific field.
    pub fn drop_auxiliary(&mut self) {
        self.velocity.clear();
        self.personal_best = None;
        self.loudness = 0.0;
        self.pulse_rate = 0.0;
    }
}

/// Everything an optimizer carries from one iteration to the next.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerState {
    pub agents: Vec<Agent>,
    /// Lowest-fitness solution among all evaluations of this state.
    pub global_best: EvaluatedSolution,
    /// Iterations completed on this state.
    pub iteration: u64,
    /// Steps taken by each algorithm; drives the APSO/firefly randomness decay
    /// and the bat pulse-rate schedule.
    clocks: [u64; 6],
}

impl OptimizerState {
    /// Wraps already-evaluated agents. The global best is the lowest fitness,
    /// earliest evaluation on ties.
    pub fn from_agents(agents: Vec<Agent>) -> Result<Self> {
        let global_best = agents
            .iter()
            .map(|a| &a.solution)
            .min_by(|a, b| a.fitness.total_cmp(&b.fitness).then(a.evaluation_index.cmp(&b.evaluation_index)))
            .cloned()
            .ok_or_else(|| Error::invalid("a population needs at least one agent"))?;
        Ok(Self { agents, global_best, iteration: 0, clocks: [0; 6] })
    }

    pub fn len(&self) -> usize {
        self.agents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.agents.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.global_best.position.len()
    }

    /// Number of steps `kind` has taken on this state.
    pub fn clock(&self, kind: AlgorithmKind) -> u64 {
        self.clocks[kind.index()]
    }

    pub fn reset_clocks(&mut self) {
        self.clocks = [0; 6];
    }

    pub fn drop_auxiliary(&mut self) {
        self.agents.iter_mut().for_each(Agent::drop_auxiliary);
    }

    /// Replaces the global best if `candidate` is strictly better.
    pub fn offer(&mut self, candidate: &EvaluatedSolution) {
        if candidate.improves_on(&self.global_best) {
            self.global_best = candidate.clone();
        }
    }

    pub(crate) fn finish_step(&mut self, kind: AlgorithmKind) {
        self.clocks[kind.index()] += 1;
        self.iteration += 1;
    }

    pub(crate) fn check_compatible(&self, evaluator: &Evaluator<'_>, min_population: usize) -> Result<()> {
        let dim = evaluator.problem().dimension();
        for agent in &self.agents {
            if agent.solution.position.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, actual: agent.solution.position.len() });
            }
        }
        if self.agents.len() < min_population {
            return Err(Error::invalid(format!(
                "population of {} is below the minimum of {min_population}",
                self.agents.len()
            )));
        }
        Ok(())
    }
}

/// Draws and evaluates `n` uniform agents (exactly `n` evaluations).
pub fn initialize(evaluator: &mut Evaluator<'_>, n: usize, rng: &mut dyn RandomSource) -> Result<OptimizerState> {
    let positions = init_population(evaluator.problem(), n, rng)?;
    let agents = positions.into_iter().map(|x| evaluator.evaluate(x).map(Agent::new)).collect::<Result<Vec<_>>>()?;
    OptimizerState::from_agents(agents)
}

/// Common interface of base algorithms and the stepping hybrids.
pub trait Optimizer: Send + fmt::Debug {
    fn name(&self) -> String;

    /// Smallest population the optimizer can step.
    fn min_population(&self) -> usize {
        1
    }

    /// Derives any private random streams (hybrids only) from the run's stream.
    fn attach_streams(&mut self, _parent: &RngStream) {}

    /// Initializes the per-agent extras this optimizer needs. Consumes no
    /// randomness and performs no evaluations.
    fn prepare(&mut self, state: &mut OptimizerState) -> Result<()>;

    /// One iteration. Returns the number of candidate solutions generated,
    /// each of which was evaluated exactly once.
    fn step(
        &mut self,
        state: &mut OptimizerState,
        evaluator: &mut Evaluator<'_>,
        rng: &mut dyn RandomSource,
    ) -> Result<u64>;
}

/// Algorithm name plus its parameters, as written in experiment configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum AlgorithmConfig {
    Pso(PsoParams),
    Apso(ApsoParams),
    Bat(BatParams),
    Firefly(FireflyParams),
    Cuckoo(CuckooParams),
    Fpa(FpaParams),
}

impl AlgorithmConfig {
    /// Default parameters for `kind`.
    pub fn default_for(kind: AlgorithmKind) -> Self {
        match kind {
            AlgorithmKind::Pso => AlgorithmConfig::Pso(PsoParams::default()),
            AlgorithmKind::Apso => AlgorithmConfig::Apso(ApsoParams::default()),
            AlgorithmKind::Bat => AlgorithmConfig::Bat(BatParams::default()),
            AlgorithmKind::Firefly => AlgorithmConfig::Firefly(FireflyParams::default()),
            AlgorithmKind::Cuckoo => AlgorithmConfig::Cuckoo(CuckooParams::default()),
            AlgorithmKind::Fpa => AlgorithmConfig::Fpa(FpaParams::default()),
        }
    }

    pub fn kind(&self) -> AlgorithmKind {
        match self {
            AlgorithmConfig::Pso(_) => AlgorithmKind::Pso,
            AlgorithmConfig::Apso(_) => AlgorithmKind::Apso,
            AlgorithmConfig::Bat(_) => AlgorithmKind::Bat,
            AlgorithmConfig::Firefly(_) => AlgorithmKind::Firefly,
            AlgorithmConfig::Cuckoo(_) => AlgorithmKind::Cuckoo,
            AlgorithmConfig::Fpa(_) => AlgorithmKind::Fpa,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.build().map(|_| ())
    }

    pub fn build(&self) -> Result<Box<dyn Optimizer>> {
        Ok(match self {
            AlgorithmConfig::Pso(p) => Box::new(Pso::new(p.clone())?),
            AlgorithmConfig::Apso(p) => Box::new(Apso::new(p.clone())?),
            AlgorithmConfig::Bat(p) => Box::new(Bat::new(p.clone())?),
            AlgorithmConfig::Firefly(p) => Box::new(Firefly::new(p.clone())?),
            AlgorithmConfig::Cuckoo(p) => Box::new(Cuckoo::new(p.clone())?),
            AlgorithmConfig::Fpa(p) => Box::new(Fpa::new(p.clone())?),
        })
    }
}

/// Registered algorithm names.
pub fn algorithm_names() -> Vec<&'static str> {
    AlgorithmKind::ALL.iter().map(|k| k.name()).collect()
}

/// Looks up an algorithm by canonical name and builds it with defaults.
pub fn by_name(name: &str) -> Result<Box<dyn Optimizer>> {
    AlgorithmConfig::default_for(AlgorithmKind::from_name(name)?).build()
}

pub(crate) fn check_range(what: &str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if value >= lo && value <= hi {
        Ok(())
    } else {
        Err(Error::invalid(format!("{what} must lie in [{lo}, {hi}], got {value}")))
    }
}

pub(crate) fn check_open_unit(what: &str, value: f64) -> Result<()> {
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("{what} must lie in (0, 1), got {value}")))
    }
}

pub(crate) fn check_non_negative(what: &str, value: f64) -> Result<()> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("{what} must be non-negative and finite, got {value}")))
    }
}

/// Indices `(j, k)` of the two donors for agent `i` under permutation `perm`.
pub(crate) fn donor_pair(perm: &[usize], i: usize) -> (usize, usize) {
    (perm[i], perm[(i + 1) % perm.len()])
}


#[cfg(test)]
mod tests {
    use super::test_support::*;
    use super::*;
    use crate::problem::Problem;

    #[test]
    fn registry_round_trips_names() {
        for kind in AlgorithmKind::ALL {
            assert_eq!(AlgorithmKind::from_name(kind.name()).unwrap(), kind);
            assert_eq!(AlgorithmConfig::default_for(kind).kind(), kind);
            assert!(by_name(kind.name()).is_ok());
        }
        assert_eq!(algorithm_names(), ["pso", "apso", "bat", "firefly", "cuckoo", "fpa"]);
        assert!(by_name("ant-colony").is_err());
    }

    #[test]
    fn initial_best_prefers_earliest_on_ties() {
        let p = Problem::uniform_box("flat", 1, 0.0, 1.0, |_| 1.0).unwrap();
        let mut eval = Evaluator::new(&p, default_penalty());
        let state = state_from(&mut eval, &[vec![0.1], vec![0.2], vec![0.3]]);
        assert_eq!(state.global_best.evaluation_index, 0);
    }

    #[test]
    fn step_rejects_dimension_mismatch() {
        let p1 = problem_1d(-1.0, 1.0, sphere);
        let p2 = Problem::uniform_box("p2", 2, -1.0, 1.0, sphere).unwrap();
        let mut e1 = Evaluator::new(&p1, default_penalty());
        let mut state = state_from(&mut e1, &[vec![0.1], vec![0.2], vec![0.3]]);
        let mut e2 = Evaluator::new(&p2, default_penalty());
        for kind in AlgorithmKind::ALL {
            let mut opt = AlgorithmConfig::default_for(kind).build().unwrap();
            opt.prepare(&mut state).unwrap();
            let err = opt.step(&mut state, &mut e2, &mut RngStream::new(1)).unwrap_err();
            assert!(matches!(err, Error::DimensionMismatch { .. }), "{kind}: {err:?}");
        }
    }
}
