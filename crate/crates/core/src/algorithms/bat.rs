//! Bat algorithm.
//!
//! Each bat draws a frequency `f_i = f_min + (f_max - f_min) β`, updates its
//! velocity by `(x_i - x_*) f_i` and proposes `x_i + v_i`. With probability
//! equal to its pulse rate the proposal is replaced by a small Gaussian walk
//! around the best solution. A proposal that improves the bat is accepted when
//! a uniform draw falls below its loudness; acceptance lowers the loudness
//! (`A <- α A`) and raises the pulse rate (`r = r0 (1 - e^{-γ t})`).
//!
//! The velocity term points away from the best solution, as in the original
//! equations. Set [`BatParams::toward_best`] for the `(x_* - x_i)` convention
//! found in much of the later literature.

use serde::{Deserialize, Serialize};

use super::{check_non_negative, check_open_unit, check_range, AlgorithmKind, Optimizer, OptimizerState};
use crate::error::{Error, Result};
use crate::problem::{clamp_in_place, Evaluator};
use crate::sampling::RandomSource;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BatParams {
    pub f_min: f64,
    pub f_max: f64,
    /// Loudness decay `α` in `(0, 1)`.
    pub alpha: f64,
    /// Pulse-rate growth `γ > 0`.
    pub gamma: f64,
    /// Initial loudness `A0 > 0`.
    pub loudness0: f64,
    /// Asymptotic pulse rate `r0` in `(0, 1]`.
    pub pulse_rate0: f64,
    /// Local-walk standard deviation as a fraction of each coordinate's width.
    pub local_walk_scale: f64,
    /// Use `(x_* - x)` instead of `(x - x_*)` in the velocity update.
    pub toward_best: bool,
}

impl Default for BatParams {
    fn default() -> Self {
        Self {
            f_min: 0.0,
            f_max: 2.0,
            alpha: 0.9,
            gamma: 0.9,
            loudness0: 1.0,
            pulse_rate0: 0.5,
            local_walk_scale: 0.01,
            toward_best: false,
        }
    }
}

/// Loudness and pulse rate after an accepted move at iteration `t`:
/// `(α A, r0 (1 - e^{-γ t}))`.
pub fn bat_schedules(loudness: f64, pulse_rate0: f64, alpha: f64, gamma: f64, t: u64) -> Result<(f64, f64)> {
    check_open_unit("bat alpha", alpha)?;
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::invalid(format!("bat gamma must be positive, got {gamma}")));
    }
    Ok((alpha * loudness, pulse_rate0 * (1.0 - (-gamma * t as f64).exp())))
}

#[derive(Debug, Clone)]
pub struct Bat {
    params: BatParams,
}

impl Bat {
    pub fn new(params: BatParams) -> Result<Self> {
        if !(params.f_min.is_finite() && params.f_max.is_finite()) {
            return Err(Error::invalid("bat frequencies must be finite"));
        }
        if params.f_min > params.f_max {
            return Err(Error::invalid(format!("bat f_min ({}) exceeds f_max ({})", params.f_min, params.f_max)));
        }
        bat_schedules(1.0, 1.0, params.alpha, params.gamma, 0)?;
        if !(params.loudness0 > 0.0 && params.loudness0.is_finite()) {
            return Err(Error::invalid(format!("bat loudness0 must be positive, got {}", params.loudness0)));
        }
        check_range("bat pulse_rate0", params.pulse_rate0, f64::MIN_POSITIVE, 1.0)?;
        check_non_negative("bat local_walk_scale", params.local_walk_scale)?;
        Ok(Self { params })
    }
}

impl Optimizer for Bat {
    fn name(&self) -> String {
        AlgorithmKind::Bat.name().into()
    }

    /// Zero velocity, loudness `A0` and the pulse rate the schedule gives at
    /// the first iteration, `r0 (1 - e^{-γ})`. Starting from `r = 0` would
    /// leave bats that never improve without any local walk.
    fn prepare(&mut self, state: &mut OptimizerState) -> Result<()> {
        let dim = state.dimension();
        for agent in &mut state.agents {
            agent.velocity = vec![0.0; dim];
            agent.loudness = self.params.loudness0;
            agent.pulse_rate = self.params.pulse_rate0 * (1.0 - (-self.params.gamma).exp());
        }
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
        let p = &self.params;
        let dim = problem.dimension();
        // The step produces iteration t of this algorithm's clock, t >= 1.
        let t = state.clock(AlgorithmKind::Bat) + 1;

        for i in 0..state.agents.len() {
            let best = state.global_best.position.clone();
            let agent = &mut state.agents[i];
            if agent.velocity.len() != dim {
                agent.velocity = vec![0.0; dim];
            }

            let frequency = p.f_min + (p.f_max - p.f_min) * rng.uniform01();
            let mut next = agent.solution.position.clone();
            for d in 0..dim {
                let displacement = if p.toward_best { best[d] - next[d] } else { next[d] - best[d] };
                agent.velocity[d] += displacement * frequency;
                next[d] += agent.velocity[d];
            }
            if rng.uniform01() < agent.pulse_rate {
                for (d, x) in next.iter_mut().enumerate() {
                    *x = best[d] + p.local_walk_scale * problem.width(d) * rng.gaussian();
                }
            }
            clamp_in_place(&mut next, problem);

            let candidate = evaluator.evaluate(next)?;
            let gate = rng.uniform01();
            let agent = &mut state.agents[i];
            if candidate.fitness < agent.solution.fitness && gate < agent.loudness {
                let (loudness, pulse_rate) = bat_schedules(agent.loudness, p.pulse_rate0, p.alpha, p.gamma, t)?;
                agent.loudness = loudness;
                agent.pulse_rate = pulse_rate;
                agent.solution = candidate.clone();
            }
            state.offer(&candidate);
        }

        state.finish_step(AlgorithmKind::Bat);
        Ok(state.agents.len() as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::super::test_support::*;
    use super::*;

    #[test]
    fn schedule_values() {
        let (a, r) = bat_schedules(1.0, 0.5, 0.9, 0.9, 0).unwrap();
        assert_eq!(a, 0.9);
        assert_eq!(r, 0.0);
        let (_, r_late) = bat_schedules(1.0, 0.5, 0.9, 0.9, 100).unwrap();
        assert!((r_late - 0.5).abs() < 1e-15);
        assert!(bat_schedules(1.0, 0.5, 1.0, 0.9, 3).is_err());
        assert!(bat_schedules(1.0, 0.5, 0.5, 0.0, 3).is_err());
    }

    #[test]
    fn zero_beta_gives_minimum_frequency() {
        // β=0 -> f = f_min = 0.25; x=1, x*=0: v = 0.25, candidate 1.25
        let p = problem_1d(-5.0, 5.0, sphere);
        let mut eval = Evaluator::new(&p, default_penalty());
        let mut state = state_from(&mut eval, &[vec![0.0], vec![1.0]]);
        let mut bat = Bat::new(BatParams { f_min: 0.25, f_max: 1.0, ..Default::default() }).unwrap();
        bat.prepare(&mut state).unwrap();
        let mut rng = Scripted::uniforms(&[0.0, 0.9, 0.9, 0.0, 0.9, 0.9]);
        bat.step(&mut state, &mut eval, &mut rng).unwrap();
        assert_eq!(state.agents[1].velocity, vec![0.25]);
        // candidate 1.25 is worse than 1.0, so the bat stays put
        assert_eq!(state.agents[1].position(), &[1.0]);
    }

    #[test]
    fn hand_evaluated_frequency_velocity_candidate() {
        // f_min=0, f_max=1, β=0.5, v=0, x=1, x*=0 -> f=0.5, v=0.5, candidate 1.5
        let p = problem_1d(-5.0, 5.0, |x| (x[0] - 2.0).powi(2));
        let mut eval = Evaluator::new(&p, default_penalty());
        // x* pinned at 0 by overwriting the global best
        let mut state = state_from(&mut eval, &[vec![1.0]]);
        state.global_best = eval.evaluate(vec![0.0]).unwrap();
        state.global_best.fitness = -1.0;
        let mut bat = Bat::new(BatParams { f_min: 0.0, f_max: 1.0, ..Default::default() }).unwrap();
        bat.prepare(&mut state).unwrap();
        // β = 0.5, pulse gate 0.9 (no local walk: r ≈ 0.30), loudness gate 0.5
        let mut rng = Scripted::uniforms(&[0.5, 0.9, 0.5]);
        bat.step(&mut state, &mut eval, &mut rng).unwrap();
        assert!(rng.exhausted());
        assert_eq!(state.agents[0].velocity, vec![0.5]);
        // (1.5 - 2)^2 = 0.25 < (1 - 2)^2 = 1 and 0.5 < A = 1 -> accepted
        assert_eq!(state.agents[0].position(), &[1.5]);
        assert_eq!(state.agents[0].loudness, 0.9);
        assert!((state.agents[0].pulse_rate - 0.5 * (1.0 - (-0.9f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn velocity_unchanged_at_best() {
        let p = problem_1d(-5.0, 5.0, sphere);
        let mut eval = Evaluator::new(&p, default_penalty());
        let mut state = state_from(&mut eval, &[vec![0.5]]);
        let mut bat = Bat::new(BatParams::default()).unwrap();
        bat.prepare(&mut state).unwrap();
        state.agents[0].velocity = vec![0.125];
        let mut rng = Scripted::uniforms(&[0.7, 0.9, 0.9]);
        bat.step(&mut state, &mut eval, &mut rng).unwrap();
        assert_eq!(state.agents[0].velocity, vec![0.125]);
    }

    #[test]
    fn local_walk_around_best() {
        let p = problem_1d(-5.0, 5.0, sphere);
        let mut eval = Evaluator::new(&p, default_penalty());
        let mut state = state_from(&mut eval, &[vec![0.5], vec![3.0]]);
        let mut bat = Bat::new(BatParams::default()).unwrap();
        bat.prepare(&mut state).unwrap();
        state.agents[1].pulse_rate = 0.4;
        // agent 0: β, pulse gate (no walk since 0.5 > r), loudness gate
        // agent 1: β, pulse gate 0.1 < 0.4 -> walk 0.5 + 0.01*10*2 = 0.7, loudness gate
        let mut rng = Scripted::uniforms(&[0.3, 0.5, 0.99, 0.3, 0.1, 0.2]).with_gaussians(&[2.0]);
        bat.step(&mut state, &mut eval, &mut rng).unwrap();
        assert!(rng.exhausted());
        assert!((state.agents[1].position()[0] - 0.7).abs() < 1e-15);
    }

    #[test]
    fn inverted_frequency_range_rejected() {
        assert!(Bat::new(BatParams { f_min: 2.0, f_max: 1.0, ..Default::default() }).is_err());
        assert!(Bat::new(BatParams { alpha: 1.0, ..Default::default() }).is_err());
        assert!(Bat::new(BatParams { gamma: -1.0, ..Default::default() }).is_err());
        assert!(Bat::new(BatParams { pulse_rate0: 1.5, ..Default::default() }).is_err());
    }
}
