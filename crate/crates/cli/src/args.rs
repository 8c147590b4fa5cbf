//! Command-line surface. Every experiment writes its artifact to `--out`
//! (relative paths resolve against `WCSLAB_OUT_DIR` when set), and every
//! run that involves randomness takes an explicit `--seed` so artifacts
//! are reproducible byte for byte.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const DEFAULT_SEED: u64 = 17;

#[derive(Parser, Debug)]
#[command(
    name = "wcslab",
    version,
    about = "Coefficient-level laboratory for a weighted composition semigroup and its adjoints"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a coefficient vector and write it as JSON.
    Gen(GenArgs),
    /// Apply one semigroup operator to a stored vector.
    Apply(ApplyArgs),
    /// Iterate an operator and record norms along the orbit.
    Orbit(OrbitArgs),
    /// Detect the return period of an adjoint orbit started at a kernel.
    Period(PeriodArgs),
    /// Gram-matrix rank and conditioning diagnostics for a family.
    Gram(GramArgs),
    /// Spectral-radius probe for the forward operator.
    Radius(RadiusArgs),
    /// Norm-growth (expansivity) measurements on random polynomials.
    Expansive(ExpansiveArgs),
    /// Distance from 1 to the nested spans of the h-family.
    #[command(name = "rh-sweep")]
    RhSweep(RhSweepArgs),
    /// Diagnostics for the difference family h_k - h_2.
    #[command(name = "m-diag")]
    MDiag(MDiagArgs),
    /// Distance of each adjoint iterate to the h-family span.
    #[command(name = "orbit-residual")]
    OrbitResidual(OrbitResidualArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Adjoint eigenvector with eigenvalue n^-k.
    F,
    /// Cesaro-kernel family g_k.
    G,
    /// Zeta kernel at s.
    Kappa,
    /// Log-series family h_k.
    H,
    /// Constant function 1.
    One,
    /// Seeded random exact polynomial.
    Random,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpName {
    /// Forward operator.
    W,
    /// Adjoint (block-sum) operator.
    Wstar,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
    Both,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    /// Family index for f/g/h.
    #[arg(long)]
    pub k: Option<u32>,
    /// Real part of s for the kappa family.
    #[arg(long)]
    pub s_re: Option<f64>,
    /// Imaginary part of s for the kappa family.
    #[arg(long, default_value_t = 0.0)]
    pub s_im: f64,
    /// Storage degree of the generated vector.
    #[arg(long)]
    pub degree: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct ApplyArgs {
    #[arg(long, value_enum)]
    pub op: OpName,
    #[arg(long)]
    pub n: usize,
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Cap the output storage degree; dropped trusted mass joins the tail.
    #[arg(long)]
    pub max_degree: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct OrbitArgs {
    #[arg(long, value_enum)]
    pub op: OpName,
    #[arg(long)]
    pub n: usize,
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub steps: usize,
    /// Keep a snapshot every this many steps (1 keeps all).
    #[arg(long)]
    pub snapshot_stride: Option<usize>,
    /// Storage budget per iterate, as a degree.
    #[arg(long)]
    pub max_degree: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct PeriodArgs {
    #[arg(long)]
    pub n: usize,
    /// Numerator of the rotation number alpha.
    #[arg(long)]
    pub alpha_p: i64,
    /// Denominator of the rotation number alpha.
    #[arg(long)]
    pub alpha_q: i64,
    #[arg(long, default_value_t = 1_000_000)]
    pub degree: usize,
    #[arg(long, default_value_t = 1e-2)]
    pub tol: f64,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct GramArgs {
    /// Family to span: f, g, h (indexed) or kappa (parameter grid).
    #[arg(long, value_enum)]
    pub family: Family,
    /// Number of family members.
    #[arg(long, default_value_t = 6)]
    pub count: usize,
    #[arg(long, default_value_t = 10_000)]
    pub degree: usize,
    /// Re s for the kappa grid.
    #[arg(long, default_value_t = 0.75)]
    pub s_re: f64,
    /// Smallest Im s on the kappa grid.
    #[arg(long, default_value_t = 0.5)]
    pub t_min: f64,
    /// Largest Im s on the kappa grid.
    #[arg(long, default_value_t = 2.5)]
    pub t_max: f64,
    /// Eigenvalue threshold for the effective rank (default 1e-8 * max).
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct RadiusArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 8)]
    pub m_max: u32,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct ExpansiveArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 25)]
    pub trials: usize,
    #[arg(long, default_value_t = 100)]
    pub degree: usize,
    #[arg(long, default_value_t = 6)]
    pub m_max: u32,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct RhSweepArgs {
    #[arg(long)]
    pub kmax: usize,
    #[arg(long, default_value_t = 10_000)]
    pub degree: usize,
    /// Ridge added to the Gram diagonal only when it is ill-conditioned.
    #[arg(long, default_value_t = 0.0)]
    pub ridge: f64,
    /// Skip the independent dense least-squares cross-check.
    #[arg(long)]
    pub skip_dual_check: bool,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct MDiagArgs {
    /// Largest family index K; the family is {h_k - h_2 : 3 <= k <= K}.
    #[arg(long)]
    pub kmax: usize,
    #[arg(long, default_value_t = 10_000)]
    pub degree: usize,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct OrbitResidualArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 10)]
    pub steps: usize,
    /// Span size: basis is {h_2 .. h_kmax}.
    #[arg(long)]
    pub kmax: usize,
    #[arg(long, default_value_t = 10_000)]
    pub degree: usize,
    /// Start vector file; defaults to the constant 1.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}
