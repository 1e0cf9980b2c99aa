use std::path::PathBuf;

use thiserror::Error;

/// Every problem found in a config, reported together.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid configuration:\n  - {}", problems.join("\n  - "))]
pub struct ValidationError {
    pub problems: Vec<String>,
}

impl ValidationError {
    pub fn single(problem: impl Into<String>) -> Self {
        Self { problems: vec![problem.into()] }
    }
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Validation(#[from] ValidationError),

    #[error("run failed: {0}")]
    Runtime(#[from] swarmopt::Error),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A file exists but its contents are not what the harness writes.
    #[error("{}: {message}", path.display())]
    Format { path: PathBuf, message: String },
}

impl HarnessError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io { path: path.into(), source }
    }

    pub fn format(path: impl Into<PathBuf>, message: impl ToString) -> Self {
        HarnessError::Format { path: path.into(), message: message.to_string() }
    }

    /// Process exit code: 2 for bad configs, 3 for failed runs, 4 for file problems.
    pub fn exit_code(&self) -> u8 {
        match self {
            HarnessError::Validation(_) => 2,
            HarnessError::Runtime(_) => 3,
            HarnessError::Io { .. } | HarnessError::Format { .. } => 4,
        }
    }
}

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;
