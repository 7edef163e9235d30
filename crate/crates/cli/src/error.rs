use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid config: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] cmixlab::Error),

    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },

    /// Some grid points of a tail validation exceeded the bound.
    #[error("{count} of {total} deviation levels violate the tail bound")]
    Violation { count: usize, total: usize },
}

impl CliError {
    /// 0 success, 1 internal or numerical failure, 2 invalid config.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core(e) => match e {
                cmixlab::Error::Domain(_)
                | cmixlab::Error::BelowThreshold { .. }
                | cmixlab::Error::Parse(_) => 2,
                cmixlab::Error::Fit(_) | cmixlab::Error::Numerical { .. } => 1,
            },
            CliError::Write { .. } | CliError::Violation { .. } => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
