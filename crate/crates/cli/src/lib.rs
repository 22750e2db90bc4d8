//! Configuration, command dispatch and file emission for the `caretflow`
//! binary.

pub mod commands;
pub mod config;
pub mod emit;
pub mod svg;

pub use config::{load_config, parse_config, GridConfig, OutputConfig, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    /// 1 for bad input or I/O, 2 for a failed solve or verification.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) | CliError::Io(_) => 1,
            CliError::Solver(_) => 2,
        }
    }
}

impl From<caretflow::Error> for CliError {
    fn from(e: caretflow::Error) -> Self {
        if e.is_solver_failure() {
            CliError::Solver(e.to_string())
        } else {
            CliError::Validation(e.to_string())
        }
    }
}
