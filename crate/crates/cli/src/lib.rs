//! Command-line front end for `ppareto`: fitting, model comparison, sampling,
//! tabulation, log-binned histograms and the Santa Fe contact estimator.

pub mod args;
pub mod commands;
pub mod report;

use std::fmt;
use std::process::ExitCode;

pub use args::{Cli, Command};

/// A failed command, classified by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or parameter values (exit 2).
    Usage(String),
    /// Unreadable, malformed or degenerate input data (exit 3).
    Data(String),
    /// No family produced a valid fit (exit 4).
    NoValidFit(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
            CliError::NoValidFit(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::NoValidFit(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ppareto::Error> for CliError {
    fn from(e: ppareto::Error) -> Self {
        use ppareto::Error as E;
        let msg = e.to_string();
        match e {
            E::InvalidParams(_) => CliError::Usage(msg),
            E::NoValidFit(_) => CliError::NoValidFit(msg),
            _ => CliError::Data(msg),
        }
    }
}

/// Runs one parsed command line.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Fit(a) => commands::fit(a),
        Command::Sample(a) => commands::sample(a),
        Command::Tabulate(a) => commands::tabulate(a),
        Command::Hist(a) => commands::hist(a),
        Command::Santafe(a) => commands::santafe(a),
    }
}

/// Runs and maps the outcome to a process exit code, reporting errors on stderr.
pub fn main_with(cli: &Cli) -> ExitCode {
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
