//! Command-line front end for the `advmatch-core` simulator.
//!
//! Every subcommand writes header-first, newline-terminated CSV. Exit codes
//! are 0 on success, 2 for configuration or input errors and 3 when a resource
//! limit (memory cap, search budget, oracle size) is hit.

pub mod commands;
pub mod error;
pub mod grid;
pub mod ingest;
pub mod output;
pub mod settings;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use error::{CliError, Result};
pub use settings::Settings;

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "ADVMATCH_WORKERS";

#[derive(Debug, Parser)]
#[command(
    name = "advmatch",
    version,
    about = "Database matching under adversarial column deletions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Args)]
pub struct CommandArgs {
    /// Flat `key = value` file; flags override its entries
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub settings: Settings,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Adversarial and random matching capacities over a budget grid
    Capacity(CommandArgs),
    /// Per-trial results of the matching scheme against one adversary
    Simulate(CommandArgs),
    /// Aggregated results over a grid of columns, rates, budgets and strategies
    Sweep(CommandArgs),
    /// Fraction of rows some deletion pattern can force into collision
    Vulnerability(CommandArgs),
    /// How often two column histograms coincide, against row count
    HistogramStudy(CommandArgs),
    /// Estimate a symbol law from a CSV file and report its matching risk
    Ingest(CommandArgs),
}

fn workers(s: &Settings) -> Result<Option<usize>> {
    if let Some(w) = s.workers {
        return Ok(Some(w));
    }
    match std::env::var(WORKERS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::config(WORKERS_ENV, format!("`{v}` is not a count"))),
        Err(_) => Ok(None),
    }
}

pub fn run(cli: Cli) -> Result<()> {
    let (args, f): (CommandArgs, fn(&Settings) -> Result<()>) = match cli.command {
        Command::Capacity(a) => (a, commands::capacity),
        Command::Simulate(a) => (a, commands::simulate),
        Command::Sweep(a) => (a, commands::sweep),
        Command::Vulnerability(a) => (a, commands::vulnerability),
        Command::HistogramStudy(a) => (a, commands::histogram_study),
        Command::Ingest(a) => (a, commands::ingest),
    };
    let settings = match &args.config {
        Some(path) => args.settings.or(Settings::load_config(path)?),
        None => args.settings,
    };
    let threads = match workers(&settings)? {
        Some(0) => return Err(CliError::config("workers", "must be positive")),
        Some(w) => w,
        None => 0,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::config("workers", e.to_string()))?;
    pool.install(|| f(&settings))
}
