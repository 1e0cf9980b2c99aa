//! `summary.json`: statistics over the repeats plus a copy of the config.
//!
//! Everything outside `informational` is a pure function of the config.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::error::{HarnessError, Result};

pub const SCHEMA_VERSION: u32 = 1;
pub const SUMMARY_FILE: &str = "summary.json";

/// Final-fitness statistics over all repeats.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Statistics {
    pub runs: usize,
    pub best: f64,
    pub worst: f64,
    pub mean: f64,
    pub median: f64,
    /// Population standard deviation (divides by the number of runs).
    pub std_dev: f64,
    pub success_rate: f64,
    pub total_evaluations: u64,
}

impl Statistics {
    /// `finals` holds each run's final best fitness. A run counts as a success
    /// when `final - optimum <= threshold`.
    pub fn compute(finals: &[f64], optimum: f64, threshold: f64, total_evaluations: u64) -> Option<Self> {
        if finals.is_empty() {
            return None;
        }
        let n = finals.len() as f64;
        let mut sorted = finals.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mid = sorted.len() / 2;
        let median = if sorted.len() % 2 == 1 { sorted[mid] } else { 0.5 * (sorted[mid - 1] + sorted[mid]) };
        let mean = finals.iter().sum::<f64>() / n;
        let var = finals.iter().map(|f| (f - mean).powi(2)).sum::<f64>() / n;
        let successes = finals.iter().filter(|&&f| f - optimum <= threshold).count();
        Some(Self {
            runs: finals.len(),
            best: sorted[0],
            worst: sorted[sorted.len() - 1],
            mean,
            median,
            std_dev: var.sqrt(),
            success_rate: successes as f64 / n,
            total_evaluations,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub run_id: usize,
    pub seed: u64,
    pub final_fitness: f64,
    pub best_position: Vec<f64>,
    pub evaluations: u64,
    pub iterations: u64,
    pub trace_file: String,
}

/// Timing data. Differs between otherwise identical reruns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Informational {
    pub generated_at_unix_seconds: u64,
    pub wall_clock_seconds: Vec<f64>,
    pub total_wall_clock_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryReport {
    pub schema_version: u32,
    pub optimizer: String,
    pub optimum_value: f64,
    pub statistics: Statistics,
    pub runs: Vec<RunSummary>,
    pub config: ExperimentConfig,
    pub informational: Informational,
}

impl SummaryReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary always serializes") + "\n"
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

pub fn write_summary(path: &Path, report: &SummaryReport) -> Result<()> {
    std::fs::write(path, report.to_json()).map_err(|e| HarnessError::io(path, e))
}

pub fn read_summary(path: &Path) -> Result<SummaryReport> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    let report = SummaryReport::from_json(&text).map_err(|e| HarnessError::format(path, e))?;
    if report.schema_version != SCHEMA_VERSION {
        return Err(HarnessError::format(path, format!("unsupported schema_version {}", report.schema_version)));
    }
    Ok(report)
}
