//! Particle swarm optimization with unit inertia:
//! `v <- v + α ε1 (g* - x) + β ε2 (x* - x)`, `x <- x + v`.

use serde::{Deserialize, Serialize};

use super::{check_range, AlgorithmKind, Optimizer, OptimizerState};
use crate::error::Result;
use crate::problem::{clamp_in_place, Evaluator};
use crate::sampling::RandomSource;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PsoParams {
    /// Pull toward the global best, in `[0, 2]`.
    pub alpha: f64,
    /// Pull toward the particle's own best, in `[0, 2]`.
    pub beta: f64,
}

impl Default for PsoParams {
    fn default() -> Self {
        Self { alpha: 0.1, beta: 0.3 }
    }
}

#[derive(Debug, Clone)]
pub struct Pso {
    params: PsoParams,
}

impl Pso {
    pub fn new(params: PsoParams) -> Result<Self> {
        check_range("pso alpha", params.alpha, 0.0, 2.0)?;
        check_range("pso beta", params.beta, 0.0, 2.0)?;
        Ok(Self { params })
    }

    pub fn params(&self) -> &PsoParams {
        &self.params
    }
}

impl Optimizer for Pso {
    fn name(&self) -> String {
        AlgorithmKind::Pso.name().into()
    }

    /// Zero velocities; personal bests start at the current positions.
    fn prepare(&mut self, state: &mut OptimizerState) -> Result<()> {
        let dim = state.dimension();
        for agent in &mut state.agents {
            agent.velocity = vec![0.0; dim];
            agent.personal_best = Some(agent.solution.clone());
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
        let PsoParams { alpha, beta } = self.params;
        let dim = problem.dimension();

        for i in 0..state.agents.len() {
            let global = state.global_best.position.clone();
            let agent = &mut state.agents[i];
            if agent.velocity.len() != dim {
                agent.velocity = vec![0.0; dim];
            }
            let own_best = agent.personal_best.get_or_insert_with(|| agent.solution.clone()).position.clone();

            let mut next = agent.solution.position.clone();
            for d in 0..dim {
                let e1 = rng.uniform01();
                let e2 = rng.uniform01();
                let x = next[d];
                agent.velocity[d] += alpha * e1 * (global[d] - x) + beta * e2 * (own_best[d] - x);
                next[d] = x + agent.velocity[d];
            }
            clamp_in_place(&mut next, problem);

            let candidate = evaluator.evaluate(next)?;
            let agent = &mut state.agents[i];
            if agent.personal_best.as_ref().is_none_or(|pb| candidate.improves_on(pb)) {
                agent.personal_best = Some(candidate.clone());
            }
            agent.solution = candidate;
            let candidate = agent.solution.clone();
            state.offer(&candidate);
        }

        state.finish_step(AlgorithmKind::Pso);
        Ok(state.agents.len() as u64)
    }
}
