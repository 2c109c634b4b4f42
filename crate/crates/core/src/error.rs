//! Crate-wide error type.
//!
//! Errors fall into two classes that front ends map onto exit codes:
//! configuration/usage problems (bad input files, invalid keys, malformed
//! values) and physics/domain violations (arguments outside the model's
//! domain, non-physical parameter combinations).

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A physics or domain violation: the inputs are syntactically fine but
    /// lie outside the model's domain of validity.
    #[error("{0}")]
    Domain(String),

    /// A configuration or usage problem: malformed config text, unknown or
    /// duplicate keys, missing required fields, bad CLI arguments.
    #[error("{0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// Config error carrying a source position (1-based line and column).
    pub fn config_at(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Config(format!("line {line}, column {col}: {}", msg.into()))
    }

    /// True for errors the CLI reports as usage/config failures (exit 2)
    /// rather than physics failures (exit 3).
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Config(_) | Error::Io(_))
    }
}
