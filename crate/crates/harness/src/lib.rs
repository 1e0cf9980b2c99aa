//! Experiment runner for `swarmopt`.
//!
//! An [`ExperimentConfig`] names a benchmark, an algorithm or hybrid, a
//! budget and a repeat count. [`run_experiment`] runs the repeats in parallel,
//! each on its own seed derived from the base seed and the run index, then
//! writes one CSV trace per run and a `summary.json`.

pub mod cli;
pub mod config;
pub mod error;
pub mod experiment;
pub mod report;
pub mod trace;

pub use config::{ExperimentConfig, Overrides};
pub use error::{HarnessError, Result, ValidationError};
pub use experiment::{execute, run_experiment, run_seed, summarize, write_outputs, Experiment, RunOutcome};
pub use report::{read_summary, write_summary, Statistics, SummaryReport, SCHEMA_VERSION};
pub use trace::{read_trace, write_trace, TraceFile};
