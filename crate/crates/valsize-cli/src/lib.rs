//! Supporting library for the `valsize` command-line planner.
//!
//! The binary itself stays thin: configuration loading lives in
//! [`config`], report documents and their renderers in [`report`], and
//! failures funnel through [`CliError`], which fixes the process exit code
//! for each failure class.

pub mod config;
pub mod report;

use std::fmt;

/// Exit code for configuration problems: bad flags, malformed or
/// contradictory config documents, unreadable inputs.
pub const EXIT_CONFIG: i32 = 2;
/// Exit code for numeric precondition failures inside a computation.
pub const EXIT_NUMERIC: i32 = 3;
/// Exit code for a simulation in which every repetition was degenerate.
pub const EXIT_DEGENERATE: i32 = 4;

/// A failed run, classified by what went wrong.
#[derive(Debug)]
pub enum CliError {
    /// The request itself was invalid; nothing was computed.
    Config(String),
    /// The computation rejected its inputs or could not finish.
    Numeric(valsize::Error),
}

impl CliError {
    pub fn config(message: impl Into<String>) -> CliError {
        CliError::Config(message.into())
    }

    /// The process exit status this failure maps to.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Numeric(valsize::Error::AllRepetitionsDegenerate { .. }) => EXIT_DEGENERATE,
            CliError::Numeric(_) => EXIT_NUMERIC,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(message) => write!(f, "config error: {message}"),
            CliError::Numeric(err) => write!(f, "{err}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<valsize::Error> for CliError {
    fn from(err: valsize::Error) -> CliError {
        CliError::Numeric(err)
    }
}
