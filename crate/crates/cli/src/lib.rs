//! Command-line front end: plant loading, alpha bounds, stability sets,
//! simulation, metrics and the two case-study reproductions.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod plant;
pub mod report;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "mfc-design", version, about = "Frequency-based design of intelligent PD controllers")]
pub struct Cli {
    /// TOML file with default values for any option
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lower bound on alpha for a plant, plus the design value
    AlphaBound(commands::alpha::AlphaArgs),
    /// Predicted and verified Kp-Kd stability set
    StabilitySet(commands::region::RegionArgs),
    /// Closed-loop simulation, single loop or vehicle cascade
    Simulate(commands::simulate::SimulateArgs),
    /// IAE, IAUDD and OS of a recorded trace
    Metrics(commands::metrics::MetricsArgs),
    /// Recompute the case-study numbers and compare them with reference values
    Reproduce(commands::reproduce::ReproduceArgs),
}

pub fn run(cli: Cli) -> CliResult<()> {
    let file = config::FileConfig::load_optional(cli.config.as_deref())?;
    match cli.command {
        Command::AlphaBound(a) => commands::alpha::run(a, file),
        Command::StabilitySet(a) => commands::region::run(a, file),
        Command::Simulate(a) => commands::simulate::run(a, file),
        Command::Metrics(a) => commands::metrics::run(a),
        Command::Reproduce(a) => commands::reproduce::run(a, file),
    }
}
