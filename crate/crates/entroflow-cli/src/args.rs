//! Flag definitions. Every value flag is optional at the clap layer so a
//! config file can supply it; the commands enforce what is required after
//! merging. Numeric flags accept multiples of π ("pi/2", "3pi/4").

use crate::literals;
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

fn float_flag(s: &str) -> Result<f64, String> {
    literals::parse_float(s)
}

#[derive(Debug, Parser)]
#[command(name = "entroflow", version, about = "Entropy evolution of linear delay diffusions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mean, variance, and entropy curve of an Ornstein-Uhlenbeck process
    Ou(OuArgs),
    /// Deterministic delay-equation solution from an initial history
    Dde(DdeArgs),
    /// Variance and entropy curve of a delay diffusion
    Entropy(EntropyArgs),
    /// Hayes stability classification of the delay parameters
    Stability(StabilityArgs),
    /// Self-checking verification suites
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct OuArgs {
    /// Drift coefficient (needs a < 0 for a stationary density)
    #[arg(long, value_parser = float_flag, allow_hyphen_values = true)]
    pub a: Option<f64>,
    /// Noise intensity, sigma > 0
    #[arg(long, value_parser = float_flag, allow_hyphen_values = true)]
    pub sigma: Option<f64>,
    /// Mean of the Gaussian start (default 0)
    #[arg(long, value_parser = float_flag, allow_hyphen_values = true)]
    pub init_mean: Option<f64>,
    /// Variance of the Gaussian start; 0 means a point start (default 0)
    #[arg(long, value_parser = float_flag, allow_hyphen_values = true)]
    pub init_var: Option<f64>,
    /// Last grid time
    #[arg(long, value_parser = float_flag)]
    pub t_max: Option<f64>,
    /// Number of CSV rows; the grid is t_max·k/points, k = 1..points (default 500)
    #[arg(long)]
    pub points: Option<usize>,
    /// CSV output path
    #[arg(long)]
    pub out: Option<String>,
    /// key=value file mirroring these flags (flags win)
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DdeArgs {
    /// Instantaneous feedback coefficient
    #[arg(long, value_parser = float_flag, allow_hyphen_values = true)]
    pub a: Option<f64>,
    /// Delayed feedback coefficient
    #[arg(long, value_parser = float_flag, allow_hyphen_values = true)]
    pub b: Option<f64>,
    /// Delay, tau > 0
    #[arg(long, value_parser = float_flag)]
    pub tau: Option<f64>,
    /// Constant initial history on [-tau, 0]
    #[arg(long, value_parser = float_flag, allow_hyphen_values = true)]
    pub phi_const: Option<f64>,
    /// CSV file of s,value knots covering [-tau, 0]
    #[arg(long)]
    pub phi_file: Option<String>,
    /// Last grid time
    #[arg(long, value_parser = float_flag)]
    pub t_max: Option<f64>,
    /// Number of CSV rows; the grid is t_max·k/(points-1), k = 0..points-1 (default 500)
    #[arg(long)]
    pub points: Option<usize>,
    /// CSV output path
    #[arg(long)]
    pub out: Option<String>,
    /// key=value file mirroring these flags (flags win)
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    /// Instantaneous feedback coefficient
    #[arg(long, value_parser = float_flag, allow_hyphen_values = true)]
    pub a: Option<f64>,
    /// Delayed feedback coefficient
    #[arg(long, value_parser = float_flag, allow_hyphen_values = true)]
    pub b: Option<f64>,
    /// Delay, tau > 0
    #[arg(long, value_parser = float_flag)]
    pub tau: Option<f64>,
    /// Diffusion intensity, sigma >= 0
    #[arg(long, value_parser = float_flag, allow_hyphen_values = true)]
    pub sigma: Option<f64>,
    /// Constant initial history on [-tau, 0]
    #[arg(long, value_parser = float_flag, allow_hyphen_values = true)]
    pub phi_const: Option<f64>,
    /// CSV file of s,value knots covering [-tau, 0]
    #[arg(long)]
    pub phi_file: Option<String>,
    /// Brownian initial history scaled by this sigma-bar > 0
    #[arg(long, value_parser = float_flag)]
    pub brownian: Option<f64>,
    /// Last grid time
    #[arg(long, value_parser = float_flag)]
    pub t_max: Option<f64>,
    /// Number of CSV rows; the grid is t_max·k/points, k = 1..points (default 500)
    #[arg(long)]
    pub points: Option<usize>,
    /// CSV output path
    #[arg(long)]
    pub out: Option<String>,
    /// key=value file mirroring these flags (flags win)
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StabilityArgs {
    /// Instantaneous feedback coefficient
    #[arg(long, value_parser = float_flag, allow_hyphen_values = true)]
    pub a: Option<f64>,
    /// Delayed feedback coefficient
    #[arg(long, value_parser = float_flag, allow_hyphen_values = true)]
    pub b: Option<f64>,
    /// Delay, tau > 0
    #[arg(long, value_parser = float_flag)]
    pub tau: Option<f64>,
    /// key=value file mirroring these flags (flags win)
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// One of: identities, mc-vs-analytic, fpe-residual
    #[arg(long)]
    pub suite: Option<String>,
    /// Master seed for the randomized checks (default 42)
    #[arg(long)]
    pub seed: Option<u64>,
    /// Also write the report to this path
    #[arg(long)]
    pub out: Option<String>,
    /// key=value file mirroring these flags (flags win)
    #[arg(long)]
    pub config: Option<PathBuf>,
}
