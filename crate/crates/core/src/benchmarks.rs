//! Analytic test functions packaged as [`Problem`]s with known optima.
//!
//! Everything is stated for minimization; `sinc` is stored negated.

use std::f64::consts::{E, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{KnownOptimum, Problem};

/// `-sin(x)/x`, with the removable singularity at 0 filled by its limit `-1`.
pub fn sinc_objective(x: f64) -> f64 {
    if x == 0.0 {
        -1.0
    } else {
        -x.sin() / x
    }
}

/// `|x| exp(-sin(x²))`; minimum 0 at the origin, not differentiable there.
pub fn abs_exp_sin_objective(x: f64) -> f64 {
    x.abs() * (-(x * x).sin()).exp()
}

/// `{Σ sin²(x_i) - exp(-Σ x_i²)} · exp(-Σ sin²(√|x_i|))`; minimum -1 at the
/// origin for every dimension.
pub fn multimodal_objective(x: &[f64]) -> f64 {
    let sin_sq: f64 = x.iter().map(|v| v.sin().powi(2)).sum();
    let sq: f64 = x.iter().map(|v| v * v).sum();
    let root_sin_sq: f64 = x.iter().map(|v| v.abs().sqrt().sin().powi(2)).sum();
    (sin_sq - (-sq).exp()) * (-root_sin_sq).exp()
}

pub fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

pub fn rosenbrock(x: &[f64]) -> f64 {
    x.windows(2).map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2)).sum()
}

pub fn rastrigin(x: &[f64]) -> f64 {
    10.0 * x.len() as f64 + x.iter().map(|v| v * v - 10.0 * (2.0 * PI * v).cos()).sum::<f64>()
}

pub fn ackley(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mean_sq = x.iter().map(|v| v * v).sum::<f64>() / n;
    let mean_cos = x.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / n;
    -20.0 * (-0.2 * mean_sq.sqrt()).exp() - mean_cos.exp() + 20.0 + E
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DimensionRule {
    Fixed(usize),
    Any,
}

/// A named benchmark: objective, canonical box, optimum and remarks.
#[derive(Debug, Clone, Copy)]
pub struct BenchmarkDescriptor {
    pub name: &'static str,
    pub dimension: DimensionRule,
    pub lower: f64,
    pub upper: f64,
    /// Value of every coordinate of the optimum.
    pub optimum_coordinate: f64,
    pub optimum_value: f64,
    pub notes: &'static str,
    objective: fn(&[f64]) -> f64,
}

impl BenchmarkDescriptor {
    pub fn objective(&self, x: &[f64]) -> f64 {
        (self.objective)(x)
    }

    pub fn accepts(&self, dimension: usize) -> bool {
        match self.dimension {
            DimensionRule::Fixed(d) => d == dimension,
            DimensionRule::Any => dimension >= 1,
        }
    }

    pub fn optimum(&self, dimension: usize) -> KnownOptimum {
        KnownOptimum { position: vec![self.optimum_coordinate; dimension], value: self.optimum_value }
    }

    /// The benchmark as a problem in `dimension` coordinates.
    pub fn problem(&self, dimension: usize) -> Result<Problem> {
        if !self.accepts(dimension) {
            return Err(Error::invalid(format!("{} is not defined in dimension {dimension}", self.name)));
        }
        let optimum = self.optimum(dimension);
        Ok(Problem::uniform_box(self.name, dimension, self.lower, self.upper, self.objective)?
            .with_known_optimum(optimum.position, optimum.value))
    }
}

fn sinc_1d(x: &[f64]) -> f64 {
    sinc_objective(x[0])
}

fn abs_exp_sin_1d(x: &[f64]) -> f64 {
    abs_exp_sin_objective(x[0])
}

const SINC: BenchmarkDescriptor = BenchmarkDescriptor {
    name: "sinc",
    dimension: DimensionRule::Fixed(1),
    lower: -10.0,
    upper: 10.0,
    optimum_coordinate: 0.0,
    optimum_value: -1.0,
    notes: "negated sin(x)/x; smooth, infinitely many stationary points",
    objective: sinc_1d,
};

const ABS_EXP_SIN: BenchmarkDescriptor = BenchmarkDescriptor {
    name: "absexpsin",
    dimension: DimensionRule::Fixed(1),
    lower: -10.0,
    upper: 10.0,
    optimum_coordinate: 0.0,
    optimum_value: 0.0,
    notes: "|x| exp(-sin(x^2)); not differentiable at the optimum",
    objective: abs_exp_sin_1d,
};

const MULTIMODAL: BenchmarkDescriptor = BenchmarkDescriptor {
    name: "yang-multimodal",
    dimension: DimensionRule::Any,
    lower: -10.0,
    upper: 10.0,
    optimum_coordinate: 0.0,
    optimum_value: -1.0,
    notes: "highly multimodal; not differentiable at the optimum",
    objective: multimodal_objective,
};

const SPHERE: BenchmarkDescriptor = BenchmarkDescriptor {
    name: "sphere",
    dimension: DimensionRule::Any,
    lower: -5.12,
    upper: 5.12,
    optimum_coordinate: 0.0,
    optimum_value: 0.0,
    notes: "smooth, convex, unimodal",
    objective: sphere,
};

const ROSENBROCK: BenchmarkDescriptor = BenchmarkDescriptor {
    name: "rosenbrock",
    dimension: DimensionRule::Any,
    lower: -5.0,
    upper: 10.0,
    optimum_coordinate: 1.0,
    optimum_value: 0.0,
    notes: "smooth, curved narrow valley; constant zero in one dimension",
    objective: rosenbrock,
};

const RASTRIGIN: BenchmarkDescriptor = BenchmarkDescriptor {
    name: "rastrigin",
    dimension: DimensionRule::Any,
    lower: -5.12,
    upper: 5.12,
    optimum_coordinate: 0.0,
    optimum_value: 0.0,
    notes: "smooth, regularly multimodal",
    objective: rastrigin,
};

const ACKLEY: BenchmarkDescriptor = BenchmarkDescriptor {
    name: "ackley",
    dimension: DimensionRule::Any,
    lower: -32.768,
    upper: 32.768,
    optimum_coordinate: 0.0,
    optimum_value: 0.0,
    notes: "multimodal with a nearly flat outer region; not differentiable at the optimum",
    objective: ackley,
};

/// Smooth baselines: sphere, Rosenbrock, Rastrigin, Ackley.
pub fn standard_suite() -> Vec<BenchmarkDescriptor> {
    vec![SPHERE, ROSENBROCK, RASTRIGIN, ACKLEY]
}

/// Every registered benchmark.
pub fn all_benchmarks() -> Vec<BenchmarkDescriptor> {
    let mut all = vec![SINC, ABS_EXP_SIN, MULTIMODAL];
    all.extend(standard_suite());
    all
}

pub fn benchmark_names() -> Vec<&'static str> {
    all_benchmarks().iter().map(|b| b.name).collect()
}

pub fn by_name(name: &str) -> Result<BenchmarkDescriptor> {
    all_benchmarks()
        .into_iter()
        .find(|b| b.name == name)
        .ok_or_else(|| Error::invalid(format!("unknown problem `{name}`")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sinc_values() {
        assert_eq!(sinc_objective(0.0), -1.0);
        assert!(sinc_objective(PI).abs() < 1e-15);
        assert!((sinc_objective(PI / 2.0) + 2.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn sinc_continuous_at_zero() {
        for eps in [1e-4, 1e-8] {
            assert!((sinc_objective(eps) - sinc_objective(0.0)).abs() < eps);
            assert!((sinc_objective(-eps) - sinc_objective(0.0)).abs() < eps);
        }
    }

    #[test]
    fn abs_exp_sin_values() {
        assert_eq!(abs_exp_sin_objective(0.0), 0.0);
        assert!((abs_exp_sin_objective(1.0) - (-(1.0f64).sin()).exp()).abs() < 1e-15);
        assert!((abs_exp_sin_objective(1.0) - 0.4311).abs() < 1e-4);
    }

    #[test]
    fn multimodal_values() {
        for n in [1, 2, 5, 10] {
            assert!((multimodal_objective(&vec![0.0; n]) + 1.0).abs() < 1e-12);
        }
        let s1 = 1.0f64.sin().powi(2);
        let expected = (s1 - (-1.0f64).exp()) * (-s1).exp();
        assert!((multimodal_objective(&[1.0]) - expected).abs() < 1e-15);
    }

    #[test]
    fn standard_suite_optima() {
        assert_eq!(sphere(&[0.0; 4]), 0.0);
        assert_eq!(rosenbrock(&[1.0; 4]), 0.0);
        assert_eq!(rastrigin(&[0.0, 0.0]), 0.0);
        assert!(ackley(&[0.0; 3]).abs() < 1e-12);
    }

    #[test]
    fn every_descriptor_reproduces_its_optimum() {
        for b in all_benchmarks() {
            for n in [1, 2, 5, 10] {
                if !b.accepts(n) {
                    assert!(b.problem(n).is_err());
                    continue;
                }
                let p = b.problem(n).unwrap();
                let opt = p.known_optimum().unwrap();
                assert!((p.objective_value(&opt.position) - opt.value).abs() < 1e-12, "{} n={n}", b.name);
                assert!(p.contains(&opt.position));
            }
        }
    }

    #[test]
    fn registry_names() {
        assert_eq!(
            benchmark_names(),
            ["sinc", "absexpsin", "yang-multimodal", "sphere", "rosenbrock", "rastrigin", "ackley"]
        );
        assert!(by_name("griewank").is_err());
    }

    proptest! {
        #[test]
        fn multimodal_is_permutation_invariant(x in prop::collection::vec(-10.0f64..10.0, 1..6), rot in 0usize..6) {
            let mut y = x.clone();
            y.rotate_left(rot % x.len());
            y.reverse();
            prop_assert_eq!(multimodal_objective(&x).to_bits() == multimodal_objective(&y).to_bits()
                || (multimodal_objective(&x) - multimodal_objective(&y)).abs() < 1e-12, true);
        }

        #[test]
        fn abs_exp_sin_is_even(x in -10.0f64..10.0) {
            prop_assert_eq!(abs_exp_sin_objective(x), abs_exp_sin_objective(-x));
        }
    }
}
