//! Population-based metaheuristics: particle swarm (classic and accelerated),
//! bat, firefly, cuckoo search and flower pollination, plus sequential and
//! parallel hybrids of them and a set of analytic benchmark functions.
//!
//! All randomness flows through [`RngStream`], a seeded ChaCha8 generator, so
//! a run is reproducible bit for bit from its seed.
//!
//! ```
//! use swarmopt::{algorithms, benchmarks, run, Budget, PenaltyConfig, RngStream};
//!
//! let problem = benchmarks::by_name("sphere")?.problem(2)?;
//! let mut apso = algorithms::by_name("apso")?;
//! let record = run(apso.as_mut(), &problem, 20, Budget::evaluations(2000), PenaltyConfig::default(), &mut RngStream::new(7))?;
//! assert!(record.best.fitness < 1e-2);
//! # Ok::<(), swarmopt::Error>(())
//! ```

pub mod algorithms;
pub mod benchmarks;
pub mod error;
pub mod hybrid;
pub mod problem;
pub mod runner;
pub mod sampling;

pub use algorithms::{AlgorithmConfig, AlgorithmKind, Optimizer, OptimizerState};
pub use error::{Error, Result};
pub use hybrid::{Component, HybridSpec};
pub use problem::{clamp_to_bounds, evaluate, EvaluatedSolution, EvaluationCounter, Evaluator, PenaltyConfig, Problem};
pub use runner::{run, run_observed, Budget, RunRecord, StepReport, TraceRow};
pub use sampling::{RandomSource, RngStream};
