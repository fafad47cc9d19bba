//! The `inexact` command-line harness.
//!
//! Each subcommand resolves its parameters (flags over `--config` file over
//! defaults), runs one experiment and renders a [`report::Report`] as CSV
//! or JSON. Runs are byte-deterministic for a given seed and thread count
//! does not matter.

use std::fs;
use std::io::Write;

use clap::{Parser, Subcommand};

pub mod commands;
pub mod params;
pub mod report;

use params::Params;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags or config: exit code 2.
    #[error("{0}")]
    Usage(String),
    /// The experiment itself failed: exit code 1.
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl From<inexact::Error> for CliError {
    fn from(e: inexact::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "inexact", version, about = "Experiments on energy-aware inexact computing")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Expected influence of every bit of a function
    Influence(Params),
    /// Oblivious and influence-aware energy allocations, and their ratio alpha
    Allocate(Params),
    /// alpha against the closed form over a list of widths
    AlphaSweep(Params),
    /// Expected weighted Kendall tau of inexact quicksort under one scheme
    SortSim(Params),
    /// Oblivious over aware expected wkt, averaged over random instances
    AlphaStar(Params),
    /// Good and bad instances for the oblivious/aware ratio
    Classify(Params),
    /// Oblivious over truncated expected wkt for each (k, n)
    TruncateSweep(Params),
    /// Low-degree learning error against training set size
    Learn(Params),
    /// Fourier spectrum, bit variances and concentration
    Fourier(Params),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Influence(_) => "influence",
            Command::Allocate(_) => "allocate",
            Command::AlphaSweep(_) => "alpha-sweep",
            Command::SortSim(_) => "sort-sim",
            Command::AlphaStar(_) => "alpha-star",
            Command::Classify(_) => "classify",
            Command::TruncateSweep(_) => "truncate-sweep",
            Command::Learn(_) => "learn",
            Command::Fourier(_) => "fourier",
        }
    }

    fn params(self) -> Params {
        match self {
            Command::Influence(p)
            | Command::Allocate(p)
            | Command::AlphaSweep(p)
            | Command::SortSim(p)
            | Command::AlphaStar(p)
            | Command::Classify(p)
            | Command::TruncateSweep(p)
            | Command::Learn(p)
            | Command::Fourier(p) => p,
        }
    }
}

/// Runs one parsed invocation and writes its report.
pub fn run(cli: Cli) -> Result<(), CliError> {
    let name = cli.command.name();
    let p = cli.command.params().resolve(name)?;
    let threads = p.threads.unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Runtime(format!("thread pool: {e}")))?;
    let report = pool.install(|| commands::dispatch(name, &p))?;
    let bytes = report.render(p.format.unwrap_or_else(|| commands::default_format(name)))?;
    match &p.output {
        Some(path) => fs::write(path, &bytes).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(&bytes)
            .map_err(|e| CliError::Runtime(format!("stdout: {e}"))),
    }
}
