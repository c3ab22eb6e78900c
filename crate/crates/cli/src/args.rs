use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "fudist", version, about = "Fu distance of bipartite states under cyclic local unitaries")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed form, oracle, bounds and CHSH data for one state, as JSON.
    Analyze(AnalyzeArgs),
    /// Sweep one family parameter and write a CSV report.
    Scan(ScanArgs),
    /// Compare the oracle with every closed form on random instances.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Pseudopure,
    Werner,
    HorodeckiA,
    HorodeckiAlpha,
    Upb,
    File,
}

impl Family {
    pub fn label(self) -> &'static str {
        match self {
            Self::Pseudopure => "pseudopure",
            Self::Werner => "werner",
            Self::HorodeckiA => "horodecki-a",
            Self::HorodeckiAlpha => "horodecki-alpha",
            Self::Upb => "upb",
            Self::File => "file",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    /// State family; implied `file` when --file is given.
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    /// Werner local dimension, or both pseudopure dimensions.
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub dim_a: Option<usize>,
    #[arg(long)]
    pub dim_b: Option<usize>,
    /// Werner weight on the symmetric subspace.
    #[arg(long)]
    pub p: Option<f64>,
    /// Pseudopure mixing weight.
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Comma-separated Schmidt coefficients of the pseudopure pure part.
    #[arg(long, value_delimiter = ',')]
    pub coeffs: Option<Vec<f64>>,
    /// Largest Schmidt coefficient; the rest share the remaining weight equally.
    #[arg(long)]
    pub am: Option<f64>,
    /// JSON state file `{"m":..,"n":..,"rho":[[re,im],..]}`.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    /// Also run the numerical maximization over the commutant of ρ_B.
    #[arg(long)]
    pub oracle: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub oracle: OracleArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub oracle: OracleArgs,
    #[arg(long)]
    pub start: f64,
    #[arg(long)]
    pub stop: f64,
    #[arg(long)]
    pub steps: usize,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random instances per family.
    #[arg(long, default_value_t = 10)]
    pub instances: usize,
    /// Where failing instances are written for replay.
    #[arg(long, default_value = ".")]
    pub replay_dir: PathBuf,
    /// Test hook: corrupt the closed form of one family.
    #[arg(long, hide = true)]
    pub inject_fault: Option<String>,
}
