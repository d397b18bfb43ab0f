//! Command line companion to the `macroreal` core: configuration, JSON and
//! CSV serialization, parameter sweeps and derivative-free maximization.

pub mod config;
pub mod format;
pub mod output;
pub mod scan;
pub mod search;

use std::fmt;

/// Errors split by exit code: bad input (1) versus internal failure (2).
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Internal(_) => 2,
        }
    }

    pub fn input(msg: impl Into<String>) -> CliError {
        CliError::Input(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> CliError {
        CliError::Internal(msg.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<macroreal::Error> for CliError {
    fn from(e: macroreal::Error) -> Self {
        match e {
            macroreal::Error::InvalidInput(m) => CliError::Input(m),
            macroreal::Error::Solver(m) => CliError::Internal(m),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Internal(format!("I/O: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(format!("JSON: {e}"))
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
