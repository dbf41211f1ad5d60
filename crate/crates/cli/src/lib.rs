//! Batch front end for `pointcover-core`: instance files, generators,
//! solver dispatch with verification, and benchmark sweeps.

pub mod bench;
pub mod generate;
pub mod instance;
pub mod solve;

use pointcover_core::Error;

/// Failures, grouped by the exit code they map to.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("{0}")]
    Cap(String),
    #[error("verification failed: {0}")]
    Mismatch(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) | CliError::Io(_) => 2,
            CliError::Cap(_) => 3,
            CliError::Mismatch(_) => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded { .. } | Error::NodeLimit(_) => CliError::Cap(e.to_string()),
            // a solver contradicting itself is a bug, same as a failed cross-check
            Error::Internal(_) => CliError::Mismatch(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}
