use std::process::ExitCode;

use stigma_core::{Assumption, ModelError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Missing or malformed configuration, or an assumption-1 violation.
    #[error("config error: {0}")]
    Config(String),
    #[error("assumption failure: {0}")]
    Assumption(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("cannot write output: {0}")]
    Output(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Output(_) => 2,
            CliError::Assumption(_) => 3,
            CliError::Numerical(_) => 4,
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.code())
    }

    /// Parameter validation failures are configuration errors.
    pub(crate) fn from_invalid_params(e: ModelError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        match e.assumption() {
            Some(Assumption::ParticipationOfTesting) => CliError::Config(e.to_string()),
            Some(Assumption::UtilityGap) => CliError::Assumption(e.to_string()),
            None => match e {
                ModelError::InvalidParameter { .. } | ModelError::NonZeroTrueRisk(_) | ModelError::NoPairs => {
                    CliError::Config(e.to_string())
                }
                _ => CliError::Numerical(e.to_string()),
            },
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Output(e.to_string())
    }
}
