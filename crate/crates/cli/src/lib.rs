//! Command-line front end for `vacresp-core`: kernel grids, region maps,
//! scenario observables and the oracle report, written as CSV or JSON.

pub mod commands;
pub mod config;
pub mod output;

use vacresp_core::Error;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: u8 = 0;
    pub const CONFIG: u8 = 2;
    pub const NOT_CONVERGED: u8 = 3;
    pub const DIVERGENT: u8 = 4;
    pub const ORACLE: u8 = 5;
}

#[derive(Debug, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn config(message: String) -> Self {
        Self {
            code: exit::CONFIG,
            message,
        }
    }

    /// A library rejection of a configured value.
    pub fn invalid_config(e: Error) -> Self {
        Self::config(format!("invalid configuration: {e}"))
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotConverged { .. } | Error::ExtrapolationFailed { .. } | Error::ContinuationMismatch { .. } => {
                exit::NOT_CONVERGED
            }
            Error::DivergentResponse { .. } => exit::DIVERGENT,
            _ => exit::CONFIG,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self {
            code: 1,
            message: e.to_string(),
        }
    }
}
