//! `pbci`: exact confidence regions for the mean success probability of a
//! Bernoulli chain.
//!
//! Exit codes: 0 success, 1 coverage violation or failed check, 2 usage or
//! input error, 3 numeric failure.

mod args;
mod coverage;
mod interval;
mod verify;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numeric(String),
}

impl From<pbci::Error> for CliError {
    fn from(e: pbci::Error) -> Self {
        match e {
            pbci::Error::Domain(_) => CliError::Usage(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

/// Outcome of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    Violation,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Interval(a) => interval::run(&a),
        Command::Coverage(a) => coverage::run(&a),
        Command::Verify(a) => verify::run(&a),
    };
    if let Err(e) = &result {
        match e {
            CliError::Usage(msg) => eprintln!("error: {msg}"),
            CliError::Numeric(msg) => eprintln!("numeric failure: {msg}"),
        }
    }
    ExitCode::from(exit_code(&result))
}

fn exit_code(result: &Result<Outcome, CliError>) -> u8 {
    match result {
        Ok(Outcome::Ok) => 0,
        Ok(Outcome::Violation) => 1,
        Err(CliError::Usage(_)) => 2,
        Err(CliError::Numeric(_)) => 3,
    }
}
