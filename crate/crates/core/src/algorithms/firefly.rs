//! Firefly algorithm.
//!
//! For every ordered pair `(i, j)` with `j` brighter (lower fitness) than `i`,
//! firefly `i` proposes
//! `x_i + β0 e^{-γ r_ij²} (x_j - x_i) + α_t ε`, with `ε` uniform in
//! `[-0.5, 0.5]` times the coordinate width. Each proposal is evaluated and
//! kept only if it improves `i`. After the sweep `α_t = α0 δ^t` decays.

use serde::{Deserialize, Serialize};

use super::{check_non_negative, check_open_unit, AlgorithmKind, Optimizer, OptimizerState};
use crate::error::Result;
use crate::problem::{clamp_in_place, Evaluator};
use crate::sampling::RandomSource;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FireflyParams {
    /// Attractiveness at zero distance.
    pub beta0: f64,
    /// Light absorption; `0` means undiminished attraction.
    pub gamma: f64,
    /// Initial randomness.
    pub alpha0: f64,
    /// Randomness decay `δ` in `(0, 1)`.
    pub delta: f64,
}

impl Default for FireflyParams {
    fn default() -> Self {
        Self { beta0: 1.0, gamma: 1.0, alpha0: 0.5, delta: 0.97 }
    }
}

/// `α0 δ^t`.
pub fn firefly_alpha(alpha0: f64, delta: f64, t: u64) -> f64 {
    alpha0 * delta.powf(t as f64)
}

/// Deterministic part of a firefly move: `x_i + β0 e^{-γ r²} (x_j - x_i)`.
pub fn attraction_move(xi: &[f64], xj: &[f64], beta0: f64, gamma: f64) -> Vec<f64> {
    let r2: f64 = xi.iter().zip(xj).map(|(a, b)| (a - b) * (a - b)).sum();
    let attraction = beta0 * (-gamma * r2).exp();
    xi.iter().zip(xj).map(|(a, b)| a + attraction * (b - a)).collect()
}

#[derive(Debug, Clone)]
pub struct Firefly {
    params: FireflyParams,
}

impl Firefly {
    pub fn new(params: FireflyParams) -> Result<Self> {
        check_non_negative("firefly beta0", params.beta0)?;
        check_non_negative("firefly gamma", params.gamma)?;
        check_non_negative("firefly alpha0", params.alpha0)?;
        check_open_unit("firefly delta", params.delta)?;
        Ok(Self { params })
    }

    pub fn current_alpha(&self, state: &OptimizerState) -> f64 {
        firefly_alpha(self.params.alpha0, self.params.delta, state.clock(AlgorithmKind::Firefly))
    }
}

impl Optimizer for Firefly {
    fn name(&self) -> String {
        AlgorithmKind::Firefly.name().into()
    }

    fn prepare(&mut self, _state: &mut OptimizerState) -> Result<()> {
        Ok(())
    }

    /// Returns the number of brighter pairs that triggered a move; between 0
    /// and `n (n - 1)`.
    fn step(
        &mut self,
        state: &mut OptimizerState,
        evaluator: &mut Evaluator<'_>,
        rng: &mut dyn RandomSource,
    ) -> Result<u64> {
        state.check_compatible(evaluator, 1)?;
        let problem = evaluator.problem();
        let FireflyParams { beta0, gamma, .. } = self.params;
        let alpha = self.current_alpha(state);
        let n = state.agents.len();
        let mut moves = 0;

        for i in 0..n {
            for j in 0..n {
                if i == j || state.agents[j].fitness() >= state.agents[i].fitness() {
                    continue;
                }
                moves += 1;
                let mut next = attraction_move(state.agents[i].position(), state.agents[j].position(), beta0, gamma);
                for (d, x) in next.iter_mut().enumerate() {
                    *x += alpha * (rng.uniform01() - 0.5) * problem.width(d);
                }
                clamp_in_place(&mut next, problem);
                let candidate = evaluator.evaluate(next)?;
                state.offer(&candidate);
                if candidate.improves_on(&state.agents[i].solution) {
                    state.agents[i].solution = candidate;
                }
            }
        }

        state.finish_step(AlgorithmKind::Firefly);
        Ok(moves)
    }
}
