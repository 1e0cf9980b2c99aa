//! Cuckoo search.
//!
//! Each iteration runs two sweeps over the nests:
//!
//! 1. Global: `x' = x + α L(λ)` coordinate-wise with Lévy steps `L`; the egg
//!    replaces a uniformly chosen nest if it is better than that nest.
//! 2. Local: `x' = x + a s H(p_a - ε) (x_j - x_k)` with `s, ε` uniform per
//!    coordinate, `H` the Heaviside step and `j, k` consecutive entries of a
//!    fresh random permutation; kept if it improves the nest.
//!
//! Exactly `2n` evaluations per iteration.

use serde::{Deserialize, Serialize};

use super::{check_non_negative, check_range, donor_pair, AlgorithmKind, Optimizer, OptimizerState};
use crate::error::Result;
use crate::problem::{clamp_in_place, Evaluator};
use crate::sampling::{LevyParams, RandomSource};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CuckooParams {
    /// Switch probability `p_a` gating the local move, in `[0, 1]`.
    pub pa: f64,
    /// Lévy step scale `α` as a fraction of each coordinate's width.
    pub step_scale: f64,
    /// Multiplier `a` of the local difference move.
    pub local_scale: f64,
    /// Lévy exponent `λ` in `(1, 3)`.
    pub lambda: f64,
}

impl Default for CuckooParams {
    fn default() -> Self {
        Self { pa: 0.25, step_scale: 0.01, local_scale: 1.0, lambda: 1.5 }
    }
}

#[derive(Debug, Clone)]
pub struct Cuckoo {
    params: CuckooParams,
    levy: LevyParams,
}

impl Cuckoo {
    pub fn new(params: CuckooParams) -> Result<Self> {
        check_range("cuckoo pa", params.pa, 0.0, 1.0)?;
        check_non_negative("cuckoo step_scale", params.step_scale)?;
        check_non_negative("cuckoo local_scale", params.local_scale)?;
        let levy = LevyParams::new(params.lambda, 1.0)?;
        Ok(Self { params, levy })
    }
}

impl Optimizer for Cuckoo {
    fn name(&self) -> String {
        AlgorithmKind::Cuckoo.name().into()
    }

    fn min_population(&self) -> usize {
        3
    }

    fn prepare(&mut self, _state: &mut OptimizerState) -> Result<()> {
        Ok(())
    }

    fn step(
        &mut self,
        state: &mut OptimizerState,
        evaluator: &mut Evaluator<'_>,
        rng: &mut dyn RandomSource,
    ) -> Result<u64> {
        state.check_compatible(evaluator, self.min_population())?;
        let problem = evaluator.problem();
        let p = &self.params;
        let n = state.agents.len();

        for i in 0..n {
            let mut egg = state.agents[i].solution.position.clone();
            for (d, x) in egg.iter_mut().enumerate() {
                *x += p.step_scale * problem.width(d) * rng.levy(&self.levy);
            }
            clamp_in_place(&mut egg, problem);
            let egg = evaluator.evaluate(egg)?;
            state.offer(&egg);
            let host = rng.index_below(n);
            if egg.improves_on(&state.agents[host].solution) {
                state.agents[host].solution = egg;
            }
        }

        let perm = rng.permutation(n);
        for i in 0..n {
            let (j, k) = donor_pair(&perm, i);
            let mut next = state.agents[i].solution.position.clone();
            for (d, x) in next.iter_mut().enumerate() {
                let s = rng.uniform01();
                let eps = rng.uniform01();
                let gate = if p.pa - eps > 0.0 { 1.0 } else { 0.0 };
                let diff = state.agents[j].position()[d] - state.agents[k].position()[d];
                *x += p.local_scale * s * gate * diff;
            }
            clamp_in_place(&mut next, problem);
            let candidate = evaluator.evaluate(next)?;
            state.offer(&candidate);
            if candidate.improves_on(&state.agents[i].solution) {
                state.agents[i].solution = candidate;
            }
        }

        state.finish_step(AlgorithmKind::Cuckoo);
        Ok(2 * n as u64)
    }
}
