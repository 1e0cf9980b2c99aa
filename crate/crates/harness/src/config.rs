use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use swarmopt::algorithms::AlgorithmKind;
use swarmopt::benchmarks::{self, BenchmarkDescriptor};
use swarmopt::{AlgorithmConfig, Budget, Component, HybridSpec, PenaltyConfig};

use crate::error::{HarnessError, Result, ValidationError};

/// One experiment: a problem, an optimizer and how often to run it.
///
/// Read from TOML. Every field has a default, so a config file only needs
/// the parts it changes. Exactly one of `algorithm` and `hybrid` must be set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: String,
    pub dimension: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algorithm: Option<AlgorithmConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hybrid: Option<HybridSpec>,
    pub population: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_evaluations: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iterations: Option<u64>,
    pub repeats: usize,
    pub seed: u64,
    pub output_dir: PathBuf,
    /// Keep every k-th iteration in the written traces (the initial and the
    /// final row are always kept).
    pub trace_every: u64,
    /// A run succeeds when its final fitness is within this distance of the
    /// problem's known optimum.
    pub success_threshold: f64,
    pub penalty: PenaltyConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            problem: "sphere".into(),
            dimension: 2,
            algorithm: None,
            hybrid: None,
            population: 20,
            max_evaluations: None,
            max_iterations: None,
            repeats: 1,
            seed: 0,
            output_dir: PathBuf::from("results"),
            trace_every: 1,
            success_threshold: 1e-3,
            penalty: PenaltyConfig::default(),
        }
    }
}

/// Command-line values that replace config fields.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    /// Replaces both `algorithm` and `hybrid` with this algorithm at default parameters.
    pub algorithm: Option<String>,
    pub problem: Option<String>,
    pub dimension: Option<usize>,
    pub population: Option<usize>,
    pub max_evaluations: Option<u64>,
    pub max_iterations: Option<u64>,
    pub seed: Option<u64>,
    pub repeats: Option<usize>,
    pub output_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, ValidationError> {
        toml::from_str(text).map_err(|e| ValidationError::single(format!("config does not parse: {}", e.message())))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Ok(Self::from_toml_str(&text)?)
    }

    pub fn apply(&mut self, overrides: &Overrides) -> Result<(), ValidationError> {
        if let Some(name) = &overrides.algorithm {
            let kind = AlgorithmKind::from_name(name).map_err(|e| ValidationError::single(e.to_string()))?;
            self.algorithm = Some(AlgorithmConfig::default_for(kind));
            self.hybrid = None;
        }
        if let Some(p) = &overrides.problem {
            self.problem = p.clone();
        }
        macro_rules! set {
            ($($field:ident),*) => {$(
                if let Some(v) = &overrides.$field {
                    self.$field = v.clone().into();
                }
            )*};
        }
        set!(dimension, population, max_evaluations, max_iterations, seed, repeats, output_dir);
        Ok(())
    }

    pub fn budget(&self) -> Budget {
        Budget { max_evaluations: self.max_evaluations, max_iterations: self.max_iterations }
    }

    pub fn component(&self) -> Option<Component> {
        match (&self.algorithm, &self.hybrid) {
            (Some(a), None) => Some(a.clone().into()),
            (None, Some(h)) => Some(h.clone().into()),
            _ => None,
        }
    }

    /// Label for reports: the algorithm name or the hybrid structure.
    pub fn optimizer_label(&self) -> String {
        match (&self.algorithm, &self.hybrid) {
            (Some(a), _) => a.kind().name().to_string(),
            (None, Some(h)) => h.structure().to_string(),
            (None, None) => "none".to_string(),
        }
    }

    pub fn benchmark(&self) -> Result<BenchmarkDescriptor, ValidationError> {
        benchmarks::by_name(&self.problem).map_err(|e| ValidationError::single(e.to_string()))
    }

    /// Checks everything that can be checked before running and reports all
    /// violations at once.
    pub fn validate(&self) -> Result<(), ValidationError> {
        let mut problems = Vec::new();
        match benchmarks::by_name(&self.problem) {
            Ok(b) if !b.accepts(self.dimension) => {
                problems.push(format!("problem {} does not accept dimension {}", self.problem, self.dimension))
            }
            Ok(_) => {}
            Err(_) => problems.push(format!(
                "unknown problem {:?} (known: {})",
                self.problem,
                benchmarks::benchmark_names().join(", ")
            )),
        }
        if self.population == 0 {
            problems.push("population must be at least 1".into());
        }
        match (&self.algorithm, &self.hybrid) {
            (None, None) => problems.push("set either [algorithm] or [hybrid]".into()),
            (Some(_), Some(_)) => problems.push("set only one of [algorithm] and [hybrid]".into()),
            (Some(a), None) => match a.build() {
                Ok(opt) if opt.min_population() > self.population => problems.push(format!(
                    "{} needs a population of at least {}, got {}",
                    opt.name(),
                    opt.min_population(),
                    self.population
                )),
                Ok(_) => {}
                Err(e) => problems.push(format!("algorithm: {e}")),
            },
            (None, Some(h)) => {
                if let Err(e) = h.validate() {
                    problems.push(format!("hybrid: {e}"));
                } else if let Some(need) = hybrid_min_population(h) {
                    if need > self.population {
                        problems.push(format!("hybrid needs a population of at least {need}, got {}", self.population));
                    }
                }
                if let HybridSpec::ParallelSplit { groups, .. } = h {
                    let total: usize = groups.iter().map(|g| g.size).sum();
                    if total != self.population {
                        problems
                            .push(format!("split group sizes sum to {total} but population is {}", self.population));
                    }
                }
            }
        }
        if let Err(e) = self.budget().validate() {
            problems.push(e.to_string());
        }
        if let Some(max) = self.max_evaluations {
            if max > 0 && (max as usize) < self.population {
                problems.push(format!("max_evaluations {max} is below the population size {}", self.population));
            }
        }
        if self.repeats == 0 {
            problems.push("repeats must be at least 1".into());
        }
        if self.trace_every == 0 {
            problems.push("trace_every must be at least 1".into());
        }
        if !(self.success_threshold >= 0.0 && self.success_threshold.is_finite()) {
            problems.push(format!("success_threshold must be finite and non-negative, got {}", self.success_threshold));
        }
        if let Err(e) = PenaltyConfig::new(self.penalty.coefficient, self.penalty.exponent) {
            problems.push(e.to_string());
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(ValidationError { problems })
        }
    }
}

fn hybrid_min_population(spec: &HybridSpec) -> Option<usize> {
    match spec {
        HybridSpec::Sequential { .. } => spec
            .flattened_stages()
            .ok()?
            .iter()
            .map(|(c, _)| c.build().map(|o| o.min_population()).ok())
            .try_fold(1, |acc, m| m.map(|m| acc.max(m))),
        _ => spec.build().ok().map(|o| o.min_population()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use swarmopt::algorithms::PsoParams;

    fn pso_config() -> ExperimentConfig {
        ExperimentConfig {
            algorithm: Some(AlgorithmConfig::default_for(AlgorithmKind::Pso)),
            max_evaluations: Some(1000),
            ..Default::default()
        }
    }

    #[test]
    fn minimal_toml() {
        let cfg = ExperimentConfig::from_toml_str(
            r#"
            problem = "rastrigin"
            dimension = 5
            max_iterations = 50
            [algorithm]
            name = "pso"
            alpha = 0.2
            "#,
        )
        .unwrap();
        assert_eq!(cfg.algorithm, Some(AlgorithmConfig::Pso(PsoParams { alpha: 0.2, beta: 0.3 })));
        assert_eq!(cfg.repeats, 1);
        assert_eq!(cfg.trace_every, 1);
        cfg.validate().unwrap();
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(ExperimentConfig::from_toml_str("popsize = 3").is_err());
    }

    #[test]
    fn every_violation_reported() {
        let cfg = ExperimentConfig {
            problem: "nope".into(),
            population: 0,
            repeats: 0,
            trace_every: 0,
            ..Default::default()
        };
        let err = cfg.validate().unwrap_err();
        assert_eq!(err.problems.len(), 6, "{err}");
    }

    #[test]
    fn fixed_dimension_enforced() {
        let cfg = ExperimentConfig { problem: "sinc".into(), dimension: 2, ..pso_config() };
        assert!(cfg.validate().unwrap_err().problems[0].contains("dimension"));
    }

    #[test]
    fn small_population_for_cuckoo() {
        let cfg = ExperimentConfig {
            algorithm: Some(AlgorithmConfig::default_for(AlgorithmKind::Cuckoo)),
            population: 2,
            ..pso_config()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn split_sizes_must_cover_population() {
        let c = |k| AlgorithmConfig::default_for(k).into();
        let cfg = ExperimentConfig {
            algorithm: None,
            hybrid: Some(HybridSpec::parallel_split([(c(AlgorithmKind::Cuckoo), 5), (c(AlgorithmKind::Fpa), 5)], 5)),
            population: 12,
            ..pso_config()
        };
        let err = cfg.validate().unwrap_err();
        assert!(err.problems.iter().any(|p| p.contains("sum to 10")), "{err}");
    }

    #[test]
    fn overrides_replace_fields() {
        let mut cfg = pso_config();
        cfg.apply(&Overrides {
            algorithm: Some("fpa".into()),
            dimension: Some(4),
            seed: Some(u64::MAX),
            max_iterations: Some(9),
            ..Default::default()
        })
        .unwrap();
        assert_eq!(cfg.algorithm.unwrap().kind(), AlgorithmKind::Fpa);
        assert_eq!((cfg.dimension, cfg.seed, cfg.max_iterations), (4, u64::MAX, Some(9)));
        assert_eq!(cfg.max_evaluations, Some(1000));
        assert!(pso_config().apply(&Overrides { algorithm: Some("ant".into()), ..Default::default() }).is_err());
    }

    #[test]
    fn toml_round_trip() {
        let cfg = pso_config();
        assert_eq!(ExperimentConfig::from_toml_str(&toml::to_string(&cfg).unwrap()).unwrap(), cfg);
    }
}
