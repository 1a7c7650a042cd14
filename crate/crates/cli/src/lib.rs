//! Command implementations behind the `fwdosc` binary.
//!
//! Every command returns its artifacts as strings so that callers decide
//! where they go; `main` only parses flags, writes files and maps failures
//! to exit codes.

pub mod commands;
pub mod report;
pub mod verify;

use fwdosc::{ModelError, SolveError};

/// Process exit status of a failed command.
#[derive(Debug, thiserror::Error)]
pub enum Failure {
    #[error("verification failed: {}", .0.join(", "))]
    Verify(Vec<String>),
    #[error("{0}")]
    InvalidInput(String),
    #[error("{0}")]
    Solver(String),
    #[error("{0}")]
    Threshold(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Verify(_) => 1,
            Failure::InvalidInput(_) => 2,
            Failure::Solver(_) => 3,
            Failure::Threshold(_) => 4,
        }
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::InfeasibleTarget { .. } | ModelError::InvalidHorizon(_) | ModelError::NonFinite => {
                Failure::InvalidInput(e.to_string())
            }
            other => Failure::Solver(other.to_string()),
        }
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::Model(m) => m.into(),
            other => Failure::Solver(other.to_string()),
        }
    }
}

impl From<fwdosc::OracleError> for Failure {
    fn from(e: fwdosc::OracleError) -> Self {
        match e {
            fwdosc::OracleError::Model(m) => m.into(),
            other => Failure::Solver(other.to_string()),
        }
    }
}
