use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "hoforms", version, about = "Higher-order modular forms: invariants, Hecke operators, L-functions")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Default, Clone)]
pub struct GlobalArgs {
    /// TOML file with default settings; explicit flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub output: Option<OutputFormat>,
    /// Residual tolerance deciding the exit status.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Stored report to compare against.
    #[arg(long, global = true)]
    pub golden: Option<PathBuf>,
    /// Seed for randomized checks.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long = "out", global = true)]
    pub out: Option<PathBuf>,
    /// Add wall time to the report; off by default so reports are reproducible.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Higher invariants of a matrix module.
    Invariants(InvariantsArgs),
    /// Hecke pair checks.
    Hecke(HeckeArgs),
    /// Fourier-Taylor series operations.
    Ft(FtArgs),
    /// Completed L-functions of cusp forms.
    Lfun(LfunArgs),
    /// Convolution L-functions.
    Conv(ConvArgs),
    /// q-expansion generation and conversion.
    Forms(FormsArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum InvariantsVerb {
    Higher,
    Lower,
    Filtration,
    CheckOracle,
    CheckUnitary,
}

#[derive(Args, Debug)]
pub struct InvariantsArgs {
    #[arg(value_enum)]
    pub verb: InvariantsVerb,
    /// Matrix module JSON.
    #[arg(long)]
    pub module: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub q: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum HeckeCheck {
    Welldef,
    Adjoint,
    Norm,
    Unimodular,
    Nonunimodular,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SigmaChoice {
    Alternating,
    Trivial,
}

#[derive(Args, Debug)]
pub struct HeckeArgs {
    #[arg(long, value_enum)]
    pub check: HeckeCheck,
    /// Prime for `diag(1, p)` and the p-adic example.
    #[arg(long, default_value_t = 2)]
    pub p: u64,
    /// Double coset element: `[[a,b],[c,d]]` for SL2(Z), cycles such as
    /// `(0 4)(1 2)` for the permutation model.
    #[arg(long)]
    pub g: Option<String>,
    /// Σ = Γ(N) inside SL2(Z).
    #[arg(long, default_value_t = 1)]
    pub sigma_level: u64,
    /// Order of the invariants; finite models have `H_q = H_0`, so `q > 0` is vacuous there.
    #[arg(long, default_value_t = 0)]
    pub q: usize,
    /// Permutation model: G = S_degree, Γ = point stabilizer.
    #[arg(long, default_value_t = 5)]
    pub degree: usize,
    #[arg(long, value_enum, default_value_t = SigmaChoice::Alternating)]
    pub sigma: SigmaChoice,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum FtVerb {
    Delta,
    SolveDelta,
    Eval,
    Product,
}

#[derive(Args, Debug)]
pub struct FtArgs {
    #[arg(value_enum)]
    pub verb: FtVerb,
    /// Fourier-Taylor series JSON.
    #[arg(long)]
    pub input: PathBuf,
    /// Second factor for `product`.
    #[arg(long)]
    pub other: Option<PathBuf>,
    /// Order-0 part for `solve-delta`; zero when omitted.
    #[arg(long)]
    pub v0: Option<PathBuf>,
    /// Evaluation points, e.g. `0.1+1.2i`.
    #[arg(long, value_delimiter = ',')]
    pub z: Vec<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum LfunVerb {
    Eval,
    CheckFe,
    Decompose,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Grid {
    /// `k/2 + it` for a few `t`.
    Critical,
    /// Real parts across `(0, k)` at `t = 1`.
    Strip,
}

#[derive(Args, Debug)]
pub struct LfunArgs {
    #[arg(value_enum)]
    pub verb: LfunVerb,
    #[arg(long)]
    pub f: PathBuf,
    /// Dual form `f|S_w`; level-1 forms are their own dual.
    #[arg(long)]
    pub fhat: Option<PathBuf>,
    /// Fricke eigenvalue, used when no dual file is given.
    #[arg(long, allow_hyphen_values = true)]
    pub eps: Option<i8>,
    #[arg(long)]
    pub weight: Option<i64>,
    /// Cusp width; defaults to the level.
    #[arg(long)]
    pub width: Option<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub s: Vec<String>,
    #[arg(long, value_enum)]
    pub grid: Option<Grid>,
    #[arg(long)]
    pub truncation: Option<usize>,
    /// Split point of the cusp integral, in units of `1/√w` (check-fe defaults to 1.2).
    #[arg(long)]
    pub split: Option<f64>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConvVerb {
    Series,
    Lambda2,
    Entire,
    Onevar,
    CheckProp,
    CheckFe,
}

#[derive(Args, Debug)]
pub struct ConvArgs {
    #[arg(value_enum)]
    pub verb: ConvVerb,
    #[arg(long)]
    pub f: PathBuf,
    #[arg(long)]
    pub g: PathBuf,
    #[arg(long)]
    pub fhat: Option<PathBuf>,
    #[arg(long)]
    pub ghat: Option<PathBuf>,
    #[arg(long)]
    pub width: Option<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub s: Vec<String>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub t: Vec<String>,
    #[arg(long)]
    pub truncation: Option<usize>,
    /// Number of poles in `t` the continuation may cross.
    #[arg(long)]
    pub depth: Option<usize>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormsVerb {
    Eisenstein,
    Delta,
    Level11,
    Eta,
    Convert,
    Dual,
    Petersson,
    Ramanujan,
}

#[derive(Args, Debug)]
pub struct FormsArgs {
    #[arg(value_enum)]
    pub verb: FormsVerb,
    /// Number of coefficients to generate.
    #[arg(long, default_value_t = 20)]
    pub n: usize,
    #[arg(long)]
    pub weight: Option<i64>,
    #[arg(long)]
    pub level: Option<u64>,
    /// Eta quotient factors `m:r`, e.g. `1:2,11:2`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub factors: Vec<String>,
    #[arg(long)]
    pub label: Option<String>,
    /// Input q-expansion (JSON, or CSV for `convert`).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Second form for `petersson`.
    #[arg(long)]
    pub other: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub eps: Option<i8>,
    /// Also write the generated q-expansion here.
    #[arg(long)]
    pub save: Option<PathBuf>,
}
