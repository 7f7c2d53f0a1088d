use std::io;
use std::path::PathBuf;

use thiserror::Error;

use aoi_core::estimators::EstimateError;
use aoi_core::{ParamError, SimError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parameter error: {0}")]
    Param(String),
    #[error("tolerance check failed: {0}")]
    Tolerance(String),
    #[error("i/o error on {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Param(_) => 1,
            CliError::Tolerance(_) => 2,
            CliError::Io { .. } => 3,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<ParamError> for CliError {
    fn from(e: ParamError) -> Self {
        CliError::Param(e.to_string())
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        CliError::Param(e.to_string())
    }
}

impl From<EstimateError> for CliError {
    fn from(e: EstimateError) -> Self {
        CliError::Param(e.to_string())
    }
}
