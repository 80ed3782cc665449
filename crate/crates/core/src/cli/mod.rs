//! The `penning` command-line front end.
//!
//! Subcommands: `spectrum`, `wavefunction`, `audit` and `scan`. Exit codes are
//! 0 on success, 1 for usage errors, 2 for parameters outside the physical
//! domain, and 3 for resource limits (Fock capacity, I/O).

mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand};

pub use config::{Format, RunArgs, RunConfig, ZInput};

#[derive(Debug, Parser)]
#[command(
    name = "penning",
    version,
    about = "Coherent states of an ideal Penning trap"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mode frequencies, extremal energy and stability verdict.
    Spectrum(RunArgs),
    /// Sample the extremal or a coherent-state wavefunction on a grid.
    Wavefunction(RunArgs),
    /// Moments, uncertainty products and energy statistics per label.
    Audit(RunArgs),
    /// Stability map over a rectangle of (b, v).
    Scan(RunArgs),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Resource(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Domain(_) => 2,
            CliError::Resource(_) => 3,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        match e {
            crate::Error::Capacity { .. } => CliError::Resource(e.to_string()),
            other => CliError::Domain(other.to_string()),
        }
    }
}

type Runner = fn(&RunConfig) -> Result<String, CliError>;

/// Runs one command and returns its report text.
pub fn execute(command: &Command) -> Result<(String, RunConfig), CliError> {
    let (args, run): (&RunArgs, Runner) = match command {
        Command::Spectrum(a) => (a, commands::spectrum),
        Command::Wavefunction(a) => (a, commands::wavefunction),
        Command::Audit(a) => (a, commands::audit),
        Command::Scan(a) => (a, commands::scan),
    };
    let cfg = args.resolve()?;
    let text = run(&cfg)?;
    Ok((text, cfg))
}

/// Parses `args` (including the program name), runs, writes the report and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = execute(&cli.command).and_then(|(text, cfg)| write_report(&text, &cfg));
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("penning: {e}");
            e.exit_code()
        }
    }
}

fn write_report(text: &str, cfg: &RunConfig) -> Result<(), CliError> {
    match &cfg.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Resource(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Resource(format!("cannot write output: {e}"))),
    }
}
