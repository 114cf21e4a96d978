use std::path::PathBuf;

use thiserror::Error;

/// Failures of a CLI command, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("construction failed: {0}")]
    Build(#[from] polarflow::Error),

    #[error("admissibility failure: {0}")]
    Admissibility(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Admissibility(_) => 1,
            CliError::Build(polarflow::Error::Argument(_)) => 3,
            CliError::Build(_) => 2,
            CliError::Config(_) | CliError::Write { .. } | CliError::Read { .. } => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
