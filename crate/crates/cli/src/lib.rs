//! Command-line front end for the stigma model: config parsing, assumption
//! checks, evaluation, sweeps, optimization, simulation and figure data.

pub mod commands;
pub mod config;
pub mod error;
pub mod svg;
pub mod table;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use stigma_core::Convention;

pub use commands::{run, RunConfig};
pub use config::{load_config, FileConfig};
pub use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "stigma", version, about = "Equilibrium, welfare and simulation engine for the HIV-stigma game")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Report the modelling assumptions for the configured parameters.
    Check,
    /// Print one sweep row at the configured perceived risk.
    Evaluate,
    /// Write sweep.csv over an evenly spaced perceived-risk grid.
    Sweep,
    /// Find the welfare-maximizing perceived risk.
    Optimize,
    /// Simulate pairs and write sim.csv next to the analytic targets.
    Simulate,
    /// Write fig1.csv to fig5.csv and, with --svg, line charts.
    Figures,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Paper,
    Corrected,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Paper => Convention::Literal,
            ConventionArg::Corrected => Convention::Corrected,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Overrides `tau_hat` from the config.
    #[arg(long, global = true)]
    pub tau: Option<f64>,
    #[arg(long, global = true, default_value_t = 101)]
    pub grid: usize,
    /// Optimizer bracket tolerance.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, global = true, default_value_t = 500_000)]
    pub pairs: u64,
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Overrides `convention` from the config.
    #[arg(long, global = true, value_enum)]
    pub convention: Option<ConventionArg>,
    /// Fail with exit code 3 when the utility-gap assumption does not hold.
    #[arg(long, global = true)]
    pub strict: bool,
    #[arg(long, global = true, value_name = "DIR", default_value = ".")]
    pub out: PathBuf,
    /// Also write SVG charts from `figures`.
    #[arg(long, global = true)]
    pub svg: bool,
}
