mod args;
mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::Parser;
use localctl::Error;

use args::{Cli, Command};
use config::FileConfig;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io(String),
    Undefined(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
            CliError::Undefined(_) => 4,
        }
    }

    /// For library errors raised while turning parameters into inputs.
    pub fn from_config(e: Error) -> Self {
        CliError::Config(e.to_string())
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) | CliError::Io(m) | CliError::Undefined(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::BoundUndefined(_)
            | Error::EfficiencyUndefined(_)
            | Error::UndefinedRatio(_)
            | Error::ClosureNotStabilized { .. }
            | Error::UnsupportedUnitaryClass(_)
            | Error::NonFinite(_) => CliError::Undefined(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = FileConfig::load(cli.config.as_deref())?;
    match cli.command {
        Command::SweepJ(a) => commands::sweep_j(a, &file),
        Command::Precision(a) => commands::precision(a, &file),
        Command::OptimalField(a) => commands::optimal_field_sweep(a, &file),
        Command::Bound(a) => commands::bound(a, &file),
        Command::Cycle(a) => commands::cycle(a, &file),
        Command::GsDeg(a) => commands::gs_deg(a, &file),
        Command::Control(a) => commands::control(a, &file),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("localctl: {e}");
            ExitCode::from(e.code())
        }
    }
}
