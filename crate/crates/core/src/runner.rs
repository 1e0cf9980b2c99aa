//! Budgeted run loop producing convergence traces.

use serde::{Deserialize, Serialize};

use crate::algorithms::{initialize, Optimizer, OptimizerState};
use crate::error::{Error, Result};
use crate::problem::{EvaluatedSolution, Evaluator, PenaltyConfig, Problem};
use crate::sampling::RngStream;

/// Consecutive steps without a single evaluation after which a run gives up.
/// Only the firefly algorithm can produce such steps (all fireflies equally
/// bright).
pub const STALL_LIMIT: u32 = 100;

/// Stopping rule. A run stops as soon as any configured limit is reached, so
/// the evaluation count may overshoot by at most one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Budget {
    pub max_evaluations: Option<u64>,
    pub max_iterations: Option<u64>,
}

impl Budget {
    pub fn evaluations(n: u64) -> Self {
        Self { max_evaluations: Some(n), max_iterations: None }
    }

    pub fn iterations(n: u64) -> Self {
        Self { max_evaluations: None, max_iterations: Some(n) }
    }

    pub fn validate(&self) -> Result<()> {
        match (self.max_evaluations, self.max_iterations) {
            (None, None) => Err(Error::invalid("budget needs max_evaluations or max_iterations")),
            (Some(0), _) | (_, Some(0)) => Err(Error::invalid("budget limits must be positive")),
            _ => Ok(()),
        }
    }

    fn reached(&self, evaluations: u64, iterations: u64) -> bool {
        self.max_evaluations.is_some_and(|m| evaluations >= m) || self.max_iterations.is_some_and(|m| iterations >= m)
    }
}

/// One point of a convergence trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub iteration: u64,
    /// Cumulative evaluations, including initialization.
    pub evaluations: u64,
    pub best_fitness: f64,
    /// Stage index for sequential hybrids, 0 otherwise.
    pub stage: usize,
}

/// Result of a single run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    /// Initial row followed by one row per step that evaluated anything.
    pub trace: Vec<TraceRow>,
    pub best: EvaluatedSolution,
    pub evaluations: u64,
    pub iterations: u64,
}

/// What an observer learns about each step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepReport {
    /// Candidates the step reported generating.
    pub generated: u64,
    /// Evaluations actually performed by the step.
    pub evaluated: u64,
    pub stage: usize,
}

/// Callback invoked after every step with the updated state.
pub type Observer<'o> = dyn FnMut(&OptimizerState, StepReport) + 'o;

/// Runs `optimizer` from a fresh uniform population of size `population`.
///
/// Private streams of hybrid optimizers are derived from `rng`'s seed, and
/// every other draw comes from `rng` itself.
pub fn run(
    optimizer: &mut dyn Optimizer,
    problem: &Problem,
    population: usize,
    budget: Budget,
    penalty: PenaltyConfig,
    rng: &mut RngStream,
) -> Result<RunRecord> {
    run_observed(optimizer, problem, population, budget, penalty, rng, &mut |_, _| {})
}

/// [`run`] with a callback after every step.
pub fn run_observed(
    optimizer: &mut dyn Optimizer,
    problem: &Problem,
    population: usize,
    budget: Budget,
    penalty: PenaltyConfig,
    rng: &mut RngStream,
    observer: &mut Observer<'_>,
) -> Result<RunRecord> {
    budget.validate()?;
    check_population(optimizer, population, budget)?;
    optimizer.attach_streams(rng);
    let mut evaluator = Evaluator::new(problem, penalty);
    let mut state = initialize(&mut evaluator, population, rng)?;
    optimizer.prepare(&mut state)?;
    let mut trace = vec![row(&state, &evaluator, 0)];
    advance(optimizer, &mut state, &mut evaluator, rng, budget, 0, &mut trace, observer)?;
    Ok(finish(state, &evaluator, trace))
}

pub(crate) fn check_population(optimizer: &dyn Optimizer, population: usize, budget: Budget) -> Result<()> {
    if population < optimizer.min_population() {
        return Err(Error::invalid(format!(
            "{} needs a population of at least {}, got {population}",
            optimizer.name(),
            optimizer.min_population()
        )));
    }
    if budget.max_evaluations.is_some_and(|m| m < population as u64) {
        return Err(Error::invalid(format!(
            "evaluation budget is smaller than the initial population of {population}"
        )));
    }
    Ok(())
}

pub(crate) fn row(state: &OptimizerState, evaluator: &Evaluator<'_>, stage: usize) -> TraceRow {
    TraceRow {
        iteration: state.iteration,
        evaluations: evaluator.evaluations(),
        best_fitness: state.global_best.fitness,
        stage,
    }
}

/// Steps until `limits` (absolute evaluation and iteration counts) is reached.
#[allow(clippy::too_many_arguments)]
pub(crate) fn advance(
    optimizer: &mut dyn Optimizer,
    state: &mut OptimizerState,
    evaluator: &mut Evaluator<'_>,
    rng: &mut RngStream,
    limits: Budget,
    stage: usize,
    trace: &mut Vec<TraceRow>,
    observer: &mut Observer<'_>,
) -> Result<()> {
    let mut idle = 0;
    while !limits.reached(evaluator.evaluations(), state.iteration) {
        let before = evaluator.evaluations();
        let generated = optimizer.step(state, evaluator, rng)?;
        let evaluated = evaluator.evaluations() - before;
        observer(state, StepReport { generated, evaluated, stage });
        if evaluated > 0 {
            idle = 0;
            trace.push(row(state, evaluator, stage));
        } else {
            idle += 1;
            if idle >= STALL_LIMIT {
                break;
            }
        }
    }
    Ok(())
}

pub(crate) fn finish(state: OptimizerState, evaluator: &Evaluator<'_>, trace: Vec<TraceRow>) -> RunRecord {
    RunRecord { trace, evaluations: evaluator.evaluations(), iterations: state.iteration, best: state.global_best }
}
