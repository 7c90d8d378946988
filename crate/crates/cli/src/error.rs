//! CLI error type and the exit-code mapping.
//!
//! Exit codes: 0 success, 2 usage or configuration error, 3 I/O error,
//! 4 internal numeric failure.

use std::fmt;
use std::io;
use std::path::{Path, PathBuf};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io { path: PathBuf, source: io::Error },
    Numeric(String),
}

impl CliError {
    pub fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Numeric(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Numeric(msg) => write!(f, "numeric failure: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ns_spectra_core::Error> for CliError {
    fn from(e: ns_spectra_core::Error) -> Self {
        match e {
            ns_spectra_core::Error::Numeric(msg) => CliError::Numeric(msg.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
