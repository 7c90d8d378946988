//! Error type shared by all modules.

use alloc::string::String;
use core::fmt;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A configuration value violates its documented invariant.
    Config(String),
    /// Matrix dimensions do not admit the requested operation.
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    /// The input is degenerate for this operation (e.g. the zero matrix
    /// cannot be Frobenius-normalized).
    DegenerateInput(&'static str),
    /// A non-finite entry was encountered where finite values are required.
    NonFinite,
    /// An iterative numeric routine failed to converge.
    Numeric(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Config(msg) => write!(f, "invalid configuration: {msg}"),
            Error::DimensionMismatch { expected, found } => write!(
                f,
                "dimension mismatch: expected {}x{}, found {}x{}",
                expected.0, expected.1, found.0, found.1
            ),
            Error::DegenerateInput(what) => write!(f, "degenerate input: {what}"),
            Error::NonFinite => write!(f, "non-finite entries are not allowed"),
            Error::Numeric(what) => write!(f, "numeric failure: {what}"),
        }
    }
}

impl core::error::Error for Error {}
