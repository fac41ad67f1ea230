use std::path::Path;

use thiserror::Error;

/// Failure of a subcommand, mapped onto the process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, unreadable or invalid configuration.
    #[error("{0}")]
    Usage(String),
    /// Input data that cannot be read or parsed.
    #[error("{0}")]
    Data(String),
    /// A result that violates an invariant of the library.
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Internal(_) => 3,
        }
    }

    pub fn config(e: fhkit::Error) -> Self {
        CliError::Usage(e.to_string())
    }

    pub fn data(e: fhkit::Error) -> Self {
        match e {
            fhkit::Error::Parse { .. } | fhkit::Error::CorruptBlock(_) | fhkit::Error::Range(_) => {
                CliError::Data(e.to_string())
            }
            other => CliError::Usage(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn read_config(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))
}

pub fn read_input(path: &Path) -> CliResult<Vec<u8>> {
    std::fs::read(path).map_err(|e| CliError::Data(format!("cannot read input {}: {e}", path.display())))
}
