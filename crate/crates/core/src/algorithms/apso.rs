//! Accelerated PSO: no velocities, `x <- (1-β) x + β g* + α_t ε` with
//! normal `ε` and the decaying randomness `α_t = α0 γ^t`.

use serde::{Deserialize, Serialize};

use super::{check_non_negative, check_open_unit, check_range, AlgorithmKind, Optimizer, OptimizerState};
use crate::error::Result;
use crate::problem::{clamp_in_place, Evaluator};
use crate::sampling::RandomSource;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ApsoParams {
    /// Initial randomness `α0 >= 0`.
    pub alpha0: f64,
    /// Attraction to the global best, in `[0, 1]`; typically 0.1 to 0.7.
    pub beta: f64,
    /// Randomness decay `γ` in `(0, 1)`.
    pub gamma: f64,
}

impl Default for ApsoParams {
    fn default() -> Self {
        Self { alpha0: 1.0, beta: 0.3, gamma: 0.97 }
    }
}

/// `α0 γ^t`.
pub fn apso_alpha(alpha0: f64, gamma: f64, t: u64) -> f64 {
    alpha0 * gamma.powf(t as f64)
}

#[derive(Debug, Clone)]
pub struct Apso {
    params: ApsoParams,
}

impl Apso {
    pub fn new(params: ApsoParams) -> Result<Self> {
        check_non_negative("apso alpha0", params.alpha0)?;
        check_range("apso beta", params.beta, 0.0, 1.0)?;
        check_open_unit("apso gamma", params.gamma)?;
        Ok(Self { params })
    }

    /// Randomness strength used by the next step on `state`.
    pub fn current_alpha(&self, state: &OptimizerState) -> f64 {
        apso_alpha(self.params.alpha0, self.params.gamma, state.clock(AlgorithmKind::Apso))
    }
}

impl Optimizer for Apso {
    fn name(&self) -> String {
        AlgorithmKind::Apso.name().into()
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
        state.check_compatible(evaluator, 1)?;
        let problem = evaluator.problem();
        let beta = self.params.beta;
        let alpha = self.current_alpha(state);

        for i in 0..state.agents.len() {
            let mut next = state.agents[i].solution.position.clone();
            for (x, g) in next.iter_mut().zip(&state.global_best.position) {
                *x = (1.0 - beta) * *x + beta * g + alpha * rng.gaussian();
            }
            clamp_in_place(&mut next, problem);
            let candidate = evaluator.evaluate(next)?;
            state.offer(&candidate);
            state.agents[i].solution = candidate;
        }

        state.finish_step(AlgorithmKind::Apso);
        Ok(state.agents.len() as u64)
    }
}
