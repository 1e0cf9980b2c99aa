//! Flower pollination algorithm.
//!
//! With probability `p` a flower pollinates globally,
//! `x' = x + γ L(λ) (g_* - x)` with a Lévy draw per coordinate; otherwise
//! locally, `x' = x + U (x_j - x_k)` with `U` uniform per coordinate and
//! `j, k` taken from a fresh permutation. Proposals are kept only if better.

use serde::{Deserialize, Serialize};

use super::{check_non_negative, check_range, donor_pair, AlgorithmKind, Optimizer, OptimizerState};
use crate::error::Result;
use crate::problem::{clamp_in_place, Evaluator};
use crate::sampling::{LevyParams, RandomSource};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FpaParams {
    /// Probability of global pollination, in `[0, 1]`.
    pub switch_probability: f64,
    /// Scale `γ` of the global move.
    pub gamma: f64,
    /// Lévy exponent `λ` in `(1, 3)`.
    pub lambda: f64,
}

impl Default for FpaParams {
    fn default() -> Self {
        Self { switch_probability: 0.8, gamma: 0.1, lambda: 1.5 }
    }
}

#[derive(Debug, Clone)]
pub struct Fpa {
    params: FpaParams,
    levy: LevyParams,
}

impl Fpa {
    pub fn new(params: FpaParams) -> Result<Self> {
        check_range("fpa switch_probability", params.switch_probability, 0.0, 1.0)?;
        check_non_negative("fpa gamma", params.gamma)?;
        let levy = LevyParams::new(params.lambda, 1.0)?;
        Ok(Self { params, levy })
    }
}

impl Optimizer for Fpa {
    fn name(&self) -> String {
        AlgorithmKind::Fpa.name().into()
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
        let n = state.agents.len();
        let perm = rng.permutation(n);

        for i in 0..n {
            let mut next = state.agents[i].solution.position.clone();
            if rng.uniform01() < self.params.switch_probability {
                for (x, g) in next.iter_mut().zip(&state.global_best.position) {
                    *x += self.params.gamma * rng.levy(&self.levy) * (g - *x);
                }
            } else {
                let (j, k) = donor_pair(&perm, i);
                for (d, x) in next.iter_mut().enumerate() {
                    *x += rng.uniform01() * (state.agents[j].position()[d] - state.agents[k].position()[d]);
                }
            }
            clamp_in_place(&mut next, problem);
            let candidate = evaluator.evaluate(next)?;
            state.offer(&candidate);
            if candidate.improves_on(&state.agents[i].solution) {
                state.agents[i].solution = candidate;
            }
        }

        state.finish_step(AlgorithmKind::Fpa);
        Ok(n as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::super::test_support::*;
    use super::*;
    use crate::sampling::RngStream;

    #[test]
    fn hand_evaluated_global_pollination() {
        // x=1, g*=0, γ=0.5, L=2 -> 1 + 0.5*2*(0-1) = 0
        let p = problem_1d(-3.0, 3.0, sphere);
        let mut eval = Evaluator::new(&p, default_penalty());
        let mut state = state_from(&mut eval, &[vec![0.0], vec![1.0], vec![2.0]]);
        let mut fpa = Fpa::new(FpaParams { switch_probability: 0.5, gamma: 0.5, lambda: 1.5 }).unwrap();
        // agent 0 global (L irrelevant at g*), agent 1 global with L=2,
        // agent 2 local with U=0
        let mut rng = Scripted::new().with_uniforms(&[0.1, 0.2, 0.9, 0.0]).with_levys(&[7.0, 2.0]);
        fpa.step(&mut state, &mut eval, &mut rng).unwrap();
        assert!(rng.exhausted());
        assert_eq!(state.agents[0].position(), &[0.0]);
        assert_eq!(state.agents[1].position(), &[0.0]);
        assert_eq!(state.agents[2].position(), &[2.0]);
    }

    #[test]
    fn local_pollination_uses_donor_difference() {
        let p = problem_1d(-3.0, 3.0, sphere);
        let mut eval = Evaluator::new(&p, default_penalty());
        let mut state = state_from(&mut eval, &[vec![2.0], vec![0.5], vec![1.5]]);
        let mut fpa = Fpa::new(FpaParams { switch_probability: 0.0, ..Default::default() }).unwrap();
        // agent 0 donors (1, 2): 2 + 0.5 * (0.5 - 1.5) = 1.5
        let mut rng = Scripted::new().with_uniforms(&[0.3, 0.5, 0.3, 0.0, 0.3, 0.0]).with_permutation(vec![1, 2, 0]);
        fpa.step(&mut state, &mut eval, &mut rng).unwrap();
        assert_eq!(state.agents[0].position(), &[1.5]);
    }

    #[test]
    fn exactly_n_evaluations() {
        let p = crate::problem::Problem::uniform_box("sphere", 3, -5.0, 5.0, sphere).unwrap();
        let mut eval = Evaluator::new(&p, default_penalty());
        let mut rng = RngStream::new(4);
        let mut state = super::super::initialize(&mut eval, 7, &mut rng).unwrap();
        let mut fpa = Fpa::new(FpaParams::default()).unwrap();
        for _ in 0..5 {
            let before = eval.evaluations();
            assert_eq!(fpa.step(&mut state, &mut eval, &mut rng).unwrap(), 7);
            assert_eq!(eval.evaluations() - before, 7);
        }
    }

    #[test]
    fn parameter_ranges_enforced() {
        assert!(Fpa::new(FpaParams { switch_probability: 1.2, ..Default::default() }).is_err());
        assert!(Fpa::new(FpaParams { lambda: 0.5, ..Default::default() }).is_err());
        assert!(Fpa::new(FpaParams { gamma: -0.1, ..Default::default() }).is_err());
    }
}
