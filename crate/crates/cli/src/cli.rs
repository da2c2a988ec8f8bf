use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use goodwin_core::Scale;

use crate::output::{Decimals, DecimalsFlag, Format, OutputSpec};

#[derive(Debug, Parser)]
#[command(
    name = "goodwin",
    version,
    about = "Goodwin growth-cycle model: table reproduction, simulation and estimation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Recompute equilibria and periods from the stored parameters and
    /// compare them with the printed table.
    Reproduce(ReproduceArgs),
    /// Integrate the model and write the trajectory as t,u,v,H.
    Simulate(SimulateArgs),
    /// Relative error of equilibrium employment against empirical averages.
    Errors(ErrorsArgs),
    /// Round-trip estimation on synthetic data generated from one country.
    Estimate(EstimateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Harvie,
    Corrected,
}

impl From<Which> for Scale {
    fn from(w: Which) -> Self {
        match w {
            Which::Harvie => Scale::Harvie,
            Which::Corrected => Scale::Corrected,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Decimal places: `N` for all numeric columns or `COLUMN=N` (repeatable).
    #[arg(long)]
    pub decimals: Vec<DecimalsFlag>,
}

impl OutputArgs {
    pub fn spec(&self, default_format: Format) -> OutputSpec {
        OutputSpec {
            format: self.format.unwrap_or(default_format),
            destination: self.out.clone(),
            decimals: Decimals::from_flags(&self.decimals),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ReproduceArgs {
    /// Dataset file; defaults to the bundled table.
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    /// Restrict to the columns of one coefficient scale.
    #[arg(long, value_enum)]
    pub which: Option<Which>,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn positive(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(format!("{s} must be positive and finite"))
    }
}

fn non_negative(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if x >= 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(format!("{s} must be non-negative and finite"))
    }
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    /// Take parameters (and empirical means) from this country.
    #[arg(long, conflicts_with = "params")]
    pub country: Option<String>,
    /// Explicit parameters `alpha,beta,sigma,gamma,rho`.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub params: Option<Vec<f64>>,
    /// Coefficient scale used with --country.
    #[arg(long, value_enum, default_value = "corrected")]
    pub which: Which,
    /// Start at the country's empirical average wage share and employment.
    #[arg(long, conflicts_with_all = ["at_equilibrium", "u0", "v0"], requires = "country")]
    pub from_means: bool,
    /// Start exactly at the equilibrium.
    #[arg(long, conflicts_with_all = ["u0", "v0"])]
    pub at_equilibrium: bool,
    #[arg(long, requires = "v0")]
    pub u0: Option<f64>,
    #[arg(long, requires = "u0")]
    pub v0: Option<f64>,
    /// Step size in years (initial step for --adaptive).
    #[arg(long, default_value = "0.001", value_parser = positive)]
    pub step: f64,
    /// Horizon in years; defaults to three linearised periods, or 30.
    #[arg(long, value_parser = positive)]
    pub t_end: Option<f64>,
    /// Use the adaptive Dormand-Prince integrator with this per-step tolerance.
    #[arg(long, value_parser = positive)]
    pub adaptive: Option<f64>,
    /// Abort when |H(t) - H(0)| exceeds this.
    #[arg(long, default_value = "1e-6", value_parser = positive)]
    pub drift_tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ErrorsArgs {
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "corrected")]
    pub which: Which,
    /// Include the US (only possible with --which corrected).
    #[arg(long)]
    pub include_us: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct EstimateArgs {
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    #[arg(long)]
    pub country: String,
    /// Seed of the first replication; replication i uses seed + i.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Standard deviation of the wage-growth measurement noise.
    #[arg(long, default_value = "0", value_parser = non_negative)]
    pub noise: f64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub replications: u32,
    /// Length of the synthetic sample in years.
    #[arg(long, default_value = "35", value_parser = positive)]
    pub horizon: f64,
    /// Sampling interval in years.
    #[arg(long, default_value = "1", value_parser = positive)]
    pub sampling: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}
