use std::io::Write;
use std::path::PathBuf;

use clap::Parser;
use swarmopt::algorithms::algorithm_names;
use swarmopt::benchmarks::{all_benchmarks, DimensionRule};

use crate::config::{ExperimentConfig, Overrides};
use crate::error::Result;
use crate::experiment::run_experiment;

/// Run seeded swarm-optimizer experiments on benchmark functions.
///
/// Settings come from `--config` (TOML) when given, then the other flags
/// replace individual fields.
#[derive(Debug, Parser)]
#[command(name = "swarmopt", version)]
pub struct Cli {
    /// TOML experiment config.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Algorithm name, run with default parameters. Replaces any configured hybrid.
    #[arg(long, value_name = "NAME")]
    pub algo: Option<String>,
    #[arg(long, value_name = "NAME")]
    pub problem: Option<String>,
    #[arg(long, value_name = "N")]
    pub dim: Option<usize>,
    /// Population size.
    #[arg(long, value_name = "N")]
    pub pop: Option<usize>,
    /// Evaluation budget per run.
    #[arg(long, value_name = "N")]
    pub evals: Option<u64>,
    /// Iteration budget per run.
    #[arg(long, value_name = "N")]
    pub iters: Option<u64>,
    #[arg(long, value_name = "U64")]
    pub seed: Option<u64>,
    #[arg(long, value_name = "N")]
    pub repeats: Option<usize>,
    /// Output directory for traces and the summary.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub list_algorithms: bool,
    #[arg(long)]
    pub list_problems: bool,
}

impl Cli {
    pub fn overrides(&self) -> Overrides {
        Overrides {
            algorithm: self.algo.clone(),
            problem: self.problem.clone(),
            dimension: self.dim,
            population: self.pop,
            max_evaluations: self.evals,
            max_iterations: self.iters,
            seed: self.seed,
            repeats: self.repeats,
            output_dir: self.out.clone(),
        }
    }

    /// The config file (or defaults) with the flags applied.
    pub fn resolve_config(&self) -> Result<ExperimentConfig> {
        let mut config = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        config.apply(&self.overrides())?;
        Ok(config)
    }
}

/// Runs the command, printing listings or a short result summary to `out`.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    if cli.list_algorithms || cli.list_problems {
        if cli.list_algorithms {
            for name in algorithm_names() {
                let _ = writeln!(out, "{name}");
            }
        }
        if cli.list_problems {
            for b in all_benchmarks() {
                let dim = match b.dimension {
                    DimensionRule::Fixed(d) => format!("dim {d}"),
                    DimensionRule::Any => "any dim".to_string(),
                };
                let bounds = format!("[{}, {}]", b.lower, b.upper);
                let _ = writeln!(out, "{:<16} {:<8} {:<20} optimum {}", b.name, dim, bounds, b.optimum_value);
            }
        }
        return Ok(());
    }
    let config = cli.resolve_config()?;
    let exp = run_experiment(&config)?;
    let s = &exp.summary.statistics;
    let _ = writeln!(
        out,
        "{} on {} (dim {}), {} run(s), {} evaluations",
        exp.summary.optimizer, config.problem, config.dimension, s.runs, s.total_evaluations
    );
    let _ = writeln!(
        out,
        "best {:.3e}  median {:.3e}  mean {:.3e}  worst {:.3e}  std {:.3e}  success {:.2}",
        s.best, s.median, s.mean, s.worst, s.std_dev, s.success_rate
    );
    let _ = writeln!(out, "wrote {}", config.output_dir.display());
    Ok(())
}
