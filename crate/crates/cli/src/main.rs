//! `twoway`: key rates, security thresholds, attack scans and information
//! reports for two-way coherent-state CV-QKD.
//!
//! Exit status: 0 on success with a positive key rate, 2 when the computed
//! key rate is not positive, 1 on any error.

mod commands;
mod options;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thiserror::Error;
use twoway_core::QkdError;

use options::Options;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Qkd(#[from] QkdError),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Parser)]
#[command(
    name = "twoway",
    version,
    about = "Two-way CV-QKD key rates under two-mode coherent attacks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    options: Options,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Asymptotic key rate with every intermediate quantity
    Keyrate,
    /// Security threshold curves over a transmissivity grid
    Threshold,
    /// Brute-force search of the (g, g') plane for the lowest key rate
    Scan,
    /// Key rate of the one-way baseline
    Oneway,
    /// Mutual information and Holevo bound per attack class
    Appendix,
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let options = cli.options.resolve()?;
    let outcome = match cli.command {
        Command::Keyrate => commands::keyrate(&options)?,
        Command::Threshold => commands::threshold(&options)?,
        Command::Scan => commands::scan(&options)?,
        Command::Oneway => commands::oneway(&options)?,
        Command::Appendix => commands::appendix(&options)?,
    };
    match &options.output {
        Some(path) => std::fs::write(path, &outcome.text)?,
        None => std::io::stdout()
            .lock()
            .write_all(outcome.text.as_bytes())?,
    }
    Ok(outcome.secure)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
