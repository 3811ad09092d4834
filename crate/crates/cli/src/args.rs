use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use qfdiv::quad::DEFAULT_REL_TOL;

#[derive(Debug, Parser)]
#[command(name = "qfdiv", version, about = "Quantum f-divergences from hockey-stick integrals")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// One divergence or metric between two states.
    Divergence(DivergenceArgs),
    /// CSV table of divergences over a parameter grid.
    Sweep(SweepArgs),
    /// Run property batteries on seeded random inputs.
    Verify(VerifyArgs),
    /// Per-copy Rényi divergence of tensor powers with its finite-n bounds.
    Regularize(RegularizeArgs),
    /// Contraction coefficient estimate of a channel.
    Contraction(ContractionArgs),
    /// Differential-privacy audit of a channel on a neighbor set.
    DpAudit(DpAuditArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Metric {
    Trace,
    Dmax,
    Thompson,
    Omega,
    Fidelity,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("quantity").required(true).args(["f", "renyi", "metric"])))]
pub struct DivergenceArgs {
    /// Generator spec, e.g. `kl` or `hellinger:alpha=0.5`.
    #[arg(long)]
    pub f: Option<String>,
    /// Order α of the integral Rényi divergence.
    #[arg(long)]
    pub renyi: Option<f64>,
    #[arg(long, value_enum)]
    pub metric: Option<Metric>,
    #[arg(long)]
    pub rho: PathBuf,
    #[arg(long)]
    pub sigma: PathBuf,
    /// Relative quadrature tolerance.
    #[arg(long, default_value_t = DEFAULT_REL_TOL)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SweepKind {
    Alpha,
    Gamma,
    P,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// `ρ(p) = diag(p², 1 − p²)` against `σ` (default `diag(0.1, 0.9)`).
    Fig2Left,
    /// `ρ(p) = (1 − p)ρ + pσ`.
    Depolarizing,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub sweep: SweepKind,
    /// `start:stop:steps`, endpoints included.
    #[arg(long)]
    pub grid: String,
    #[arg(long)]
    pub rho: Option<PathBuf>,
    #[arg(long)]
    pub sigma: Option<PathBuf>,
    /// State family of a `p` sweep.
    #[arg(long, value_enum, default_value_t = Family::Fig2Left)]
    pub family: Family,
    /// Comma-separated comparator columns; the sweep variable always comes
    /// first.
    #[arg(long, value_delimiter = ',')]
    pub columns: Vec<String>,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// hockey, fdiv, renyi, contraction, bounds, dp or all.
    #[arg(long)]
    pub suite: String,
    #[arg(long, default_value_t = 20)]
    pub seeds: u64,
    #[arg(long, value_delimiter = ',', default_value = "2,3")]
    pub dims: Vec<usize>,
    /// Offset added to every seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct RegularizeArgs {
    #[arg(long)]
    pub rho: PathBuf,
    #[arg(long)]
    pub sigma: PathBuf,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 4)]
    pub n_max: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ContractionKind {
    /// `η_γ` (with `--gamma`, default 1 which is `η_Tr`).
    Gamma,
    /// Local `η_{χ²}` at `--sigma`.
    X2Local,
    /// Global `η_{χ²}` over sampled reference states.
    X2Global,
    /// Sampled `η_f` for `--f`, at `--sigma` if given.
    F,
}

#[derive(Debug, Args)]
pub struct ContractionArgs {
    #[arg(long)]
    pub channel: PathBuf,
    #[arg(long, value_enum, default_value_t = ContractionKind::Gamma)]
    pub kind: ContractionKind,
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    #[arg(long)]
    pub sigma: Option<PathBuf>,
    #[arg(long)]
    pub f: Option<String>,
    #[arg(long, default_value_t = 64)]
    pub samples: usize,
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
    /// Required by every randomized estimate.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct DpAuditArgs {
    #[arg(long)]
    pub channel: PathBuf,
    /// JSON with either `pairs` (list of two-state lists) or `states` (all
    /// pairs neighboring).
    #[arg(long)]
    pub neighbors: PathBuf,
    #[arg(long)]
    pub eps: f64,
    #[arg(long)]
    pub delta: f64,
}
