use std::path::Path;

use ccs_duet::PlanError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Malformed(String),
    #[error("{0}")]
    NonViable(String),
    #[error("{0}")]
    Invariant(String),
}

impl CliError {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Malformed(format!("{}: {e}", path.display()))
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Malformed(_) => 1,
            CliError::NonViable(_) => 2,
            CliError::Invariant(_) => 3,
        }
    }
}

impl From<PlanError> for CliError {
    fn from(e: PlanError) -> Self {
        match e {
            PlanError::Shape { .. } => CliError::Malformed(e.to_string()),
            PlanError::NonViable { .. } => CliError::NonViable(e.to_string()),
            _ => CliError::Invariant(e.to_string()),
        }
    }
}
