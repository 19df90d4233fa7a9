//! Command-line front end for `cbsig`: file formats, the `cbsig` binary's
//! subcommands and the interactive-protocol harness.
//!
//! Exit codes: 0 success or accept, 1 reject, 2 usage or input error,
//! 3 attempt budget exhausted.

pub mod commands;
pub mod envelope;
pub mod harness;
pub mod params;

use std::ffi::OsString;

use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Overrides every retry cap when set.
pub const BUDGET_ENV: &str = "CBSG_ATTEMPT_BUDGET";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("rejected: {0}")]
    Reject(String),
    #[error("{0}")]
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Reject(_) => EXIT_REJECT,
            CliError::Budget(_) => EXIT_BUDGET,
        }
    }
}

impl From<cbsig::Error> for CliError {
    fn from(e: cbsig::Error) -> Self {
        match e {
            cbsig::Error::AttemptBudgetExceeded(_) | cbsig::Error::KeygenExhausted(_) => CliError::Budget(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<envelope::EnvelopeError> for CliError {
    fn from(e: envelope::EnvelopeError) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    use clap::Parser;
    let cli = match commands::Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match commands::execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("cbsig: {e}");
            e.exit_code()
        }
    }
}
