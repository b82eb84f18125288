mod args;
mod exec;
mod output;
mod par;
mod scenario;

use std::fmt;
use std::process::ExitCode;

use clap::Parser;

/// Exit code 2.
const VALIDATION: u8 = 2;
/// Exit code 3.
const NUMERICAL: u8 = 3;

#[derive(Debug)]
pub enum Failure {
    Validation(String),
    Numerical(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Validation(m) | Failure::Numerical(m) => f.write_str(m),
        }
    }
}

impl From<cyclic_core::Error> for Failure {
    fn from(e: cyclic_core::Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Validation(e.to_string())
        }
    }
}

fn run(cli: &args::Cli) -> Result<(), Failure> {
    let (scenario, jobs) = args::scenario_for(&cli.command)?;
    let report = exec::execute(&scenario, jobs)?;
    output::emit(&scenario, &report)
}

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(VALIDATION)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(NUMERICAL)
        }
    }
}
