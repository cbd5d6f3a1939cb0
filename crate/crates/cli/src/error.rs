use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot load plant '{source_name}': {reason}")]
    PlantLoad { source_name: String, reason: String },

    #[error("cannot read config file {}: {reason}", path.display())]
    Config { path: PathBuf, reason: String },

    #[error("cannot read trace {}: {reason}", path.display())]
    Trace { path: PathBuf, reason: String },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Numerical(#[from] mfc_design::Error),

    #[error("cannot write {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::PlantLoad { .. } => 2,
            CliError::Numerical(_) => 3,
            CliError::Config { .. } | CliError::Trace { .. } | CliError::Usage(_) => 1,
            CliError::Io { .. } => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
