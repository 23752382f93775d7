mod commands;
mod report;
mod source;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use presnov_core::Error as CoreError;

use crate::commands::{coercivity, decompose, equilibria, CoercivityArgs, DecomposeArgs, EquilibriaArgs};

pub const EXIT_OK: u8 = 0;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_NUMERIC: u8 = 3;
pub const EXIT_IDENTITY: u8 = 4;
pub const EXIT_CERTIFICATE: u8 = 5;

/// Bad flags, unreadable inputs or malformed fields.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Debug, Parser)]
#[command(name = "presnov", version, about = "Presnov decomposition, coercivity probes and equilibria of vector fields")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Seed for every random choice (sampling, directions, solver starts)
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Write the JSON report here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Suppress the human-readable summary on stderr
    #[arg(long, short, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Split a field into its conservative and sphere-invariant parts at points
    Decompose(DecomposeArgs),
    /// Compare the radial profiles of a field and of its conservative part
    Coercivity(CoercivityArgs),
    /// Certify a ball and locate equilibria of the field and its conservative part
    Equilibria(EquilibriaArgs),
}

/// Exit code for an error raised before a report could be assembled.
pub fn classify(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<UsageError>().is_some() {
        return EXIT_PARSE;
    }
    match err.downcast_ref::<CoreError>() {
        Some(
            CoreError::Parse(_)
            | CoreError::UnknownCatalogEntry(_)
            | CoreError::BadCatalogParameters { .. }
            | CoreError::InvalidConfig(_)
            | CoreError::DimensionMismatch { .. }
            | CoreError::InvalidPoint(_),
        ) => EXIT_PARSE,
        Some(CoreError::CertificateFailed { .. } | CoreError::NoCertifiedRadius { .. }) => EXIT_CERTIFICATE,
        _ => EXIT_NUMERIC,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let result = match &cli.command {
        Command::Decompose(a) => decompose(a, &cli.global),
        Command::Coercivity(a) => coercivity(a, &cli.global),
        Command::Equilibria(a) => equilibria(a, &cli.global),
    };
    let mut report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(classify(&e));
        }
    };
    report.timing.elapsed_ms = started.elapsed().as_secs_f64() * 1e3;
    if let Err(e) = report.write(cli.global.out.as_deref()) {
        eprintln!("error: {e:#}");
        return ExitCode::from(EXIT_NUMERIC);
    }
    if !cli.global.quiet {
        for w in &report.warnings {
            eprintln!("warning: {w}");
        }
        if let Some(e) = &report.outcome.error {
            eprintln!("error: {e}");
        }
    }
    ExitCode::from(report.outcome.exit_code)
}
