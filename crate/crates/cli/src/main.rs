#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod config;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use dirac_hardy::Error;

use args::{Cli, Command};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or parameters: exit 2.
    Usage(String),
    /// The computation itself broke: exit 1.
    Failure(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(_)
            | Error::DimensionMismatch { .. }
            | Error::BasisTooLarge { .. }
            | Error::ModeNotInSpectrum(_)
            | Error::InadmissibleMode(_)
            | Error::NotDegenerate { .. }
            | Error::OutsideValidInterval { .. }
            | Error::SupportViolation { .. } => CliError::Usage(e.to_string()),
            Error::NotHomogeneous | Error::NoConvergence { .. } | Error::IllConditioned(_) | Error::Internal(_) => {
                CliError::Failure(e.to_string())
            }
        }
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let outcome = match &cli.command {
        Command::Constants(a) => commands::constants(a),
        Command::VerifyMode(a) => commands::verify_mode(a),
        Command::VerifyConstrained(a) => commands::verify_constrained(a),
        Command::ExcludedMode(a) => commands::excluded_mode(a),
        Command::Spectrum(a) => commands::spectrum(a),
        Command::Oracle(a) => commands::oracle(a),
        Command::Remainder(a) => commands::remainder(a),
        Command::FullSuite(a) => commands::full_suite(a),
    }?;
    let common = cli.command.common();
    let format = common.format.unwrap_or(outcome.default_format);
    let text = outcome.render(format);
    let mut stdout = std::io::stdout().lock();
    stdout
        .write_all(text.as_bytes())
        .and_then(|_| stdout.flush())
        .map_err(|e| CliError::Failure(format!("cannot write output: {e}")))?;
    if let Some(dir) = &common.out_dir {
        outcome
            .write_files(dir, format)
            .map_err(|e| CliError::Failure(format!("cannot write to {}: {e}", dir.display())))?;
    }
    let s = &outcome.report.summary;
    eprintln!(
        "{}: {}/{} checks pass, worst margin {}",
        outcome.command,
        s.passed,
        s.cases,
        output::fmt17(s.worst_margin)
    );
    for c in outcome.report.cases.iter().filter(|c| !c.pass) {
        eprintln!("  FAIL {} measured {} tolerance {}", c.name, c.measured, c.tolerance);
    }
    Ok(outcome.report.passed())
}

fn main() -> ExitCode {
    let raw: Vec<_> = std::env::args_os().collect();
    let argv = match config::expand(raw) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // --help and --version are not errors
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
