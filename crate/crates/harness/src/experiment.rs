use std::path::Path;
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use swarmopt::sampling::derive_seed;
use swarmopt::{run, Component, Problem, RngStream, RunRecord};

use crate::config::ExperimentConfig;
use crate::error::{HarnessError, Result, ValidationError};
use crate::report::{self, Informational, RunSummary, Statistics, SummaryReport, SCHEMA_VERSION};
use crate::trace::{self, TraceFile};

/// One finished repeat.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub run_id: usize,
    pub seed: u64,
    pub record: RunRecord,
    /// What goes into the trace file: thinned, with stage labels dropped.
    pub trace: TraceFile,
    pub wall_clock: Duration,
}

#[derive(Debug, Clone)]
pub struct Experiment {
    pub runs: Vec<RunOutcome>,
    pub summary: SummaryReport,
}

/// Seed of repeat `run_id`.
pub fn run_seed(base_seed: u64, run_id: usize) -> u64 {
    derive_seed(base_seed, run_id as u64)
}

pub fn trace_file_name(run_id: usize) -> String {
    format!("trace-{run_id:04}.csv")
}

/// Runs one repeat of a validated config.
pub fn run_once(config: &ExperimentConfig, problem: &Problem, run_id: usize) -> Result<RunOutcome> {
    let seed = run_seed(config.seed, run_id);
    let mut rng = RngStream::new(seed);
    let started = Instant::now();
    let record = match config.component() {
        Some(Component::Algorithm(a)) => {
            let mut opt = a.build()?;
            run(opt.as_mut(), problem, config.population, config.budget(), config.penalty, &mut rng)?
        }
        Some(Component::Hybrid(h)) => h.run(problem, config.population, config.budget(), config.penalty, &mut rng)?,
        None => unreachable!("validated config has an optimizer"),
    };
    let wall_clock = started.elapsed();
    let rows = trace::thin(&record.trace, config.trace_every)
        .into_iter()
        .map(|r| swarmopt::TraceRow { stage: 0, ..r })
        .collect();
    Ok(RunOutcome { run_id, seed, trace: TraceFile { run_id, seed, rows }, record, wall_clock })
}

/// Validates the config and runs every repeat in parallel, without writing anything.
pub fn execute(config: &ExperimentConfig) -> Result<Vec<RunOutcome>> {
    config.validate()?;
    let problem = config.benchmark()?.problem(config.dimension)?;
    (0..config.repeats).into_par_iter().map(|i| run_once(config, &problem, i)).collect()
}

pub fn summarize(config: &ExperimentConfig, runs: &[RunOutcome]) -> Result<SummaryReport> {
    let optimum_value = config.benchmark()?.optimum_value;
    let finals: Vec<f64> = runs.iter().map(|r| r.record.best.fitness).collect();
    let total = runs.iter().map(|r| r.record.evaluations).sum();
    let statistics = Statistics::compute(&finals, optimum_value, config.success_threshold, total)
        .ok_or_else(|| ValidationError::single("no runs to summarize"))?;
    let wall: Vec<f64> = runs.iter().map(|r| r.wall_clock.as_secs_f64()).collect();
    Ok(SummaryReport {
        schema_version: SCHEMA_VERSION,
        optimizer: config.optimizer_label(),
        optimum_value,
        statistics,
        runs: runs
            .iter()
            .map(|r| RunSummary {
                run_id: r.run_id,
                seed: r.seed,
                final_fitness: r.record.best.fitness,
                best_position: r.record.best.position.clone(),
                evaluations: r.record.evaluations,
                iterations: r.record.iterations,
                trace_file: trace_file_name(r.run_id),
            })
            .collect(),
        config: config.clone(),
        informational: Informational {
            generated_at_unix_seconds: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
            total_wall_clock_seconds: wall.iter().sum(),
            wall_clock_seconds: wall,
        },
    })
}

/// Writes one trace per run and `summary.json` into `dir`.
pub fn write_outputs(dir: &Path, runs: &[RunOutcome], summary: &SummaryReport) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    for r in runs {
        trace::write_trace(&dir.join(trace_file_name(r.run_id)), &r.trace)?;
    }
    report::write_summary(&dir.join(report::SUMMARY_FILE), summary)
}

/// Runs the experiment and writes its outputs to `config.output_dir`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Experiment> {
    let runs = execute(config)?;
    let summary = summarize(config, &runs)?;
    write_outputs(&config.output_dir, &runs, &summary)?;
    Ok(Experiment { runs, summary })
}

#[cfg(test)]
mod tests {
    use super::*;
    use swarmopt::algorithms::AlgorithmKind;
    use swarmopt::AlgorithmConfig;

    fn config(kind: AlgorithmKind, repeats: usize) -> ExperimentConfig {
        ExperimentConfig {
            algorithm: Some(AlgorithmConfig::default_for(kind)),
            population: 8,
            max_evaluations: Some(400),
            repeats,
            seed: 5,
            ..Default::default()
        }
    }

    #[test]
    fn runs_come_back_in_order_with_distinct_seeds() {
        let runs = execute(&config(AlgorithmKind::Apso, 6)).unwrap();
        assert_eq!(runs.iter().map(|r| r.run_id).collect::<Vec<_>>(), (0..6).collect::<Vec<_>>());
        for (i, a) in runs.iter().enumerate() {
            assert_eq!(a.seed, run_seed(5, i));
            for b in &runs[i + 1..] {
                assert_ne!(a.seed, b.seed);
                assert_ne!(a.trace.rows, b.trace.rows);
            }
        }
    }

    #[test]
    fn invalid_config_is_not_run() {
        let err = execute(&ExperimentConfig::default()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn last_trace_row_matches_final_best() {
        let mut cfg = config(AlgorithmKind::Fpa, 2);
        cfg.trace_every = 7;
        for r in execute(&cfg).unwrap() {
            let last = r.trace.rows.last().unwrap();
            assert_eq!(last.best_fitness, r.record.best.fitness);
            assert_eq!(last.evaluations, r.record.evaluations);
            assert!(r.trace.rows.iter().all(|row| row.iteration % 7 == 0 || row == last));
        }
    }
}
