//! Problem definition, counted evaluation with static penalties, bound
//! handling and uniform population initialization.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampling::RandomSource;

/// Real-valued function over a position vector.
pub type ScalarFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Known global optimum, kept as metadata for tests and success criteria.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnownOptimum {
    pub position: Vec<f64>,
    pub value: f64,
}

/// A box-bounded minimization problem with optional inequality constraints
/// `g_j(x) <= 0`.
#[derive(Clone)]
pub struct Problem {
    name: String,
    lower: Vec<f64>,
    upper: Vec<f64>,
    objective: ScalarFn,
    constraints: Vec<ScalarFn>,
    known_optimum: Option<KnownOptimum>,
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("name", &self.name)
            .field("lower", &self.lower)
            .field("upper", &self.upper)
            .field("constraints", &self.constraints.len())
            .field("known_optimum", &self.known_optimum)
            .finish()
    }
}

impl Problem {
    /// Builds a problem over the box `[lower, upper]`.
    ///
    /// Zero-width coordinates (`lower[i] == upper[i]`) are accepted and pin that
    /// coordinate; `lower[i] > upper[i]` and non-finite bounds are rejected.
    pub fn new<F>(name: impl Into<String>, lower: Vec<f64>, upper: Vec<f64>, objective: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        if lower.is_empty() {
            return Err(Error::invalid("problem dimension must be at least 1"));
        }
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch { expected: lower.len(), actual: upper.len() });
        }
        for (i, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !lo.is_finite() || !hi.is_finite() {
                return Err(Error::invalid(format!("bounds of coordinate {i} are not finite")));
            }
            if lo > hi {
                return Err(Error::invalid(format!("lower bound {lo} exceeds upper bound {hi} at coordinate {i}")));
            }
        }
        Ok(Self {
            name: name.into(),
            lower,
            upper,
            objective: Arc::new(objective),
            constraints: Vec::new(),
            known_optimum: None,
        })
    }

    /// Same bounds `[lo, hi]` on every coordinate.
    pub fn uniform_box<F>(name: impl Into<String>, dimension: usize, lo: f64, hi: f64, objective: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        Self::new(name, vec![lo; dimension], vec![hi; dimension], objective)
    }

    /// Adds an inequality constraint `g(x) <= 0`.
    pub fn with_constraint<G>(mut self, g: G) -> Self
    where
        G: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        self.constraints.push(Arc::new(g));
        self
    }

    pub fn with_known_optimum(mut self, position: Vec<f64>, value: f64) -> Self {
        self.known_optimum = Some(KnownOptimum { position, value });
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// Width of the box along coordinate `i`.
    pub fn width(&self, i: usize) -> f64 {
        self.upper[i] - self.lower[i]
    }

    pub fn known_optimum(&self) -> Option<&KnownOptimum> {
        self.known_optimum.as_ref()
    }

    /// Raw objective value, without penalty and without counting.
    pub fn objective_value(&self, x: &[f64]) -> f64 {
        (self.objective)(x)
    }

    pub fn constraint_count(&self) -> usize {
        self.constraints.len()
    }

    /// Penalty surcharge `C * sum_j max(0, g_j(x))^p`. Exactly zero when every
    /// constraint holds.
    pub fn penalty(&self, x: &[f64], config: &PenaltyConfig) -> f64 {
        let violation: f64 = self
            .constraints
            .iter()
            .map(|g| {
                let v = g(x);
                if v > 0.0 {
                    v.powf(config.exponent)
                } else if v.is_nan() {
                    f64::NAN
                } else {
                    0.0
                }
            })
            .sum();
        if violation == 0.0 {
            0.0
        } else {
            config.coefficient * violation
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dimension()
            && x.iter().zip(self.lower.iter().zip(&self.upper)).all(|(v, (lo, hi))| lo <= v && v <= hi)
    }

    fn check_dimension(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dimension() {
            return Err(Error::DimensionMismatch { expected: self.dimension(), actual: x.len() });
        }
        Ok(())
    }
}

/// Static penalty `C * sum max(0, g_j)^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PenaltyConfig {
    pub coefficient: f64,
    pub exponent: f64,
}

impl PenaltyConfig {
    pub fn new(coefficient: f64, exponent: f64) -> Result<Self> {
        if !(coefficient > 0.0 && coefficient.is_finite()) {
            return Err(Error::invalid(format!("penalty coefficient must be positive, got {coefficient}")));
        }
        if !(exponent > 0.0 && exponent.is_finite()) {
            return Err(Error::invalid(format!("penalty exponent must be positive, got {exponent}")));
        }
        Ok(Self { coefficient, exponent })
    }
}

impl Default for PenaltyConfig {
    fn default() -> Self {
        Self { coefficient: 1e3, exponent: 2.0 }
    }
}

/// Monotone count of objective evaluations within one run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EvaluationCounter {
    count: u64,
}

impl EvaluationCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    /// Records one evaluation and returns its zero-based index.
    fn tick(&mut self) -> u64 {
        let index = self.count;
        self.count += 1;
        index
    }
}

/// A position together with its penalized fitness and the order in which it
/// was evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluatedSolution {
    pub position: Vec<f64>,
    pub fitness: f64,
    pub evaluation_index: u64,
}

impl EvaluatedSolution {
    /// Strict improvement. Ties keep the incumbent.
    pub fn improves_on(&self, incumbent: &EvaluatedSolution) -> bool {
        self.fitness < incumbent.fitness
    }
}

/// Penalized objective at `position`; increments `counter` by one.
///
/// The caller is responsible for clamping `position` into the box first.
pub fn evaluate(
    problem: &Problem,
    position: &[f64],
    penalty: &PenaltyConfig,
    counter: &mut EvaluationCounter,
) -> Result<f64> {
    problem.check_dimension(position)?;
    let value = problem.objective_value(position) + problem.penalty(position, penalty);
    counter.tick();
    if !value.is_finite() {
        return Err(Error::NonFiniteObjective { position: position.to_vec(), value });
    }
    Ok(value)
}

/// Bundles a problem, its penalty settings and the run's evaluation counter.
#[derive(Debug, Clone)]
pub struct Evaluator<'a> {
    problem: &'a Problem,
    penalty: PenaltyConfig,
    counter: EvaluationCounter,
}

impl<'a> Evaluator<'a> {
    pub fn new(problem: &'a Problem, penalty: PenaltyConfig) -> Self {
        Self { problem, penalty, counter: EvaluationCounter::new() }
    }

    pub fn problem(&self) -> &'a Problem {
        self.problem
    }

    pub fn penalty(&self) -> &PenaltyConfig {
        &self.penalty
    }

    pub fn evaluations(&self) -> u64 {
        self.counter.count()
    }

    pub fn evaluate(&mut self, position: Vec<f64>) -> Result<EvaluatedSolution> {
        let evaluation_index = self.counter.count();
        let fitness = evaluate(self.problem, &position, &self.penalty, &mut self.counter)?;
        Ok(EvaluatedSolution { position, fitness, evaluation_index })
    }
}

/// Projects every coordinate onto `[lower[i], upper[i]]`.
pub fn clamp_to_bounds(position: &[f64], problem: &Problem) -> Result<Vec<f64>> {
    problem.check_dimension(position)?;
    let mut out = position.to_vec();
    clamp_in_place(&mut out, problem);
    Ok(out)
}

pub(crate) fn clamp_in_place(position: &mut [f64], problem: &Problem) {
    for ((x, lo), hi) in position.iter_mut().zip(problem.lower()).zip(problem.upper()) {
        // NaN maps to the lower bound so a broken update cannot leave the box.
        *x = if x.is_nan() { *lo } else { x.clamp(*lo, *hi) };
    }
}

/// `n` positions drawn uniformly over the box, one uniform draw per coordinate.
pub fn init_population(problem: &Problem, n: usize, rng: &mut dyn RandomSource) -> Result<Vec<Vec<f64>>> {
    if n == 0 {
        return Err(Error::invalid("population size must be at least 1"));
    }
    Ok((0..n)
        .map(|_| {
            problem.lower().iter().zip(problem.upper()).map(|(&lo, &hi)| lo + (hi - lo) * rng.uniform01()).collect()
        })
        .collect())
}
