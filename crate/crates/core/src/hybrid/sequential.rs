use crate::algorithms::{initialize, Optimizer};
use crate::error::{Error, Result};
use crate::problem::{Evaluator, PenaltyConfig, Problem};
use crate::runner::{advance, check_population, finish, row, Budget, Observer, RunRecord};
use crate::sampling::RngStream;

/// Cumulative per-stage limits: stage `k` stops at
/// `round((share_0 + ... + share_k) * total)`. The last limit is `total`.
pub fn stage_limits(shares: &[f64], total: u64) -> Result<Vec<u64>> {
    let mut acc = 0.0;
    let mut limits = Vec::with_capacity(shares.len());
    let mut previous = 0;
    for (k, share) in shares.iter().enumerate() {
        acc += share;
        let limit = if k + 1 == shares.len() { total } else { (acc * total as f64).round() as u64 };
        if limit <= previous {
            return Err(Error::invalid(format!("stage {k} (share {share}) rounds to an empty budget of {total}")));
        }
        limits.push(limit);
        previous = limit;
    }
    Ok(limits)
}

pub(crate) fn check_shares(shares: &[f64]) -> Result<()> {
    if shares.len() < 2 {
        return Err(Error::invalid("a sequential hybrid needs at least two stages"));
    }
    if shares.iter().any(|s| !(*s > 0.0 && s.is_finite())) {
        return Err(Error::invalid(format!("stage shares must be positive, got {shares:?}")));
    }
    let sum: f64 = shares.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::invalid(format!("stage shares sum to {sum}, expected 1")));
    }
    Ok(())
}

/// Runs `stages` one after another on a single population.
///
/// Each stage owns a share of the evaluation and iteration budgets. On entry
/// the per-agent extras of the previous stage are dropped, the schedule
/// clocks restart and the entering optimizer prepares the population afresh;
/// positions, fitness values and the global best carry over. Trace rows are
/// labelled with the stage index.
pub fn run_sequential(
    stages: Vec<(Box<dyn Optimizer>, f64)>,
    problem: &Problem,
    population: usize,
    budget: Budget,
    penalty: PenaltyConfig,
    rng: &mut RngStream,
) -> Result<RunRecord> {
    run_sequential_observed(stages, problem, population, budget, penalty, rng, &mut |_, _| {})
}

/// [`run_sequential`] with a callback after every step.
pub fn run_sequential_observed(
    stages: Vec<(Box<dyn Optimizer>, f64)>,
    problem: &Problem,
    population: usize,
    budget: Budget,
    penalty: PenaltyConfig,
    rng: &mut RngStream,
    observer: &mut Observer<'_>,
) -> Result<RunRecord> {
    budget.validate()?;
    let shares: Vec<f64> = stages.iter().map(|s| s.1).collect();
    check_shares(&shares)?;
    let eval_limits = budget.max_evaluations.map(|m| stage_limits(&shares, m)).transpose()?;
    let iter_limits = budget.max_iterations.map(|m| stage_limits(&shares, m)).transpose()?;
    let mut optimizers: Vec<Box<dyn Optimizer>> = stages.into_iter().map(|s| s.0).collect();
    for opt in &optimizers {
        check_population(opt.as_ref(), population, budget)?;
    }
    for (k, opt) in optimizers.iter_mut().enumerate() {
        opt.attach_streams(&rng.child(k as u64));
    }

    let mut evaluator = Evaluator::new(problem, penalty);
    let mut state = initialize(&mut evaluator, population, rng)?;
    let mut trace = vec![row(&state, &evaluator, 0)];
    for (k, opt) in optimizers.iter_mut().enumerate() {
        state.drop_auxiliary();
        state.reset_clocks();
        opt.prepare(&mut state)?;
        let limits = Budget {
            max_evaluations: eval_limits.as_ref().map(|l| l[k]),
            max_iterations: iter_limits.as_ref().map(|l| l[k]),
        };
        advance(opt.as_mut(), &mut state, &mut evaluator, rng, limits, k, &mut trace, observer)?;
    }
    Ok(finish(state, &evaluator, trace))
}
