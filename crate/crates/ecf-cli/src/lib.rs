//! Command-line front end for `ecf-core`: argument parsing, parallel drivers and CSV/JSON tables.

pub mod census_run;
pub mod output;
pub mod params;
pub mod suites;

use ecf_core::census::CensusError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Census(#[from] CensusError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) | CliError::Census(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}
