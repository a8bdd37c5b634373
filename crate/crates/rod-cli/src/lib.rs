//! Command-line front end for the rod simulator: config parsing, the
//! run driver, and the refinement study.

pub mod config;
pub mod output;
pub mod run;

use std::fmt;

pub use config::RunConfig;
pub use run::{execute_converge, execute_run, ConvergenceRow, RunSummary};

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments, config, or input files. Exit code 1.
    Usage(String),
    /// The simulation itself failed (non-finite values, constraint
    /// residual blow-up). Exit code 2.
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "error: {msg}"),
            CliError::Numerical(msg) => write!(f, "numerical abort: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}
