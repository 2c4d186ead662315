use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "etf-forge", version, about = "Build and check Steiner equiangular tight frames")]
pub struct Cli {
    /// Worker threads for parallel scans.
    #[arg(long, global = true, env = "ETF_FORGE_THREADS", default_value_t = 1)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a Steiner ETF from a design family and write it as Matrix Market.
    Generate(GenerateArgs),
    /// Check tightness, equiangularity and density of a stored frame.
    Verify(VerifyArgs),
    /// Recover (v, k, r, b) from the dimensions M and N.
    Params(ParamsArgs),
    /// Admissibility and known existence of a (2,k,v)-Steiner system.
    Admissible(AdmissibleArgs),
    /// Table of Steiner ETFs from the known design families.
    Table(TableArgs),
    /// Restricted isometry constant of a stored frame.
    Rip(RipArgs),
    /// Linear dependency among the columns of one block.
    Certificate(PathArgs),
    /// Naimark complement of a stored tight frame.
    Complement(ComplementArgs),
    /// Write the Steiner system of a family as JSON.
    Export(ExportArgs),
    /// Build an ETF from a Steiner system stored as JSON.
    Import(ImportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    Pair,
    Triple,
    Affine,
    Projective,
    Unital,
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: FamilyName,
    /// Number of points (pair, triple).
    #[arg(long)]
    pub v: Option<u64>,
    /// Field order (affine, projective, unital).
    #[arg(long)]
    pub q: Option<u64>,
    /// Geometry dimension (affine, projective).
    #[arg(long)]
    pub n: Option<u32>,
}

#[derive(Debug, Clone, Args)]
pub struct FlatArgs {
    /// Use a real Hadamard matrix when one of the needed order is known (default).
    #[arg(long, conflicts_with = "complex")]
    pub prefer_real: bool,
    /// Always use the DFT matrix.
    #[arg(long)]
    pub complex: bool,
    /// JSON list of flat-matrix descriptors, one per point (e.g. "sylvester:2", "dft:4").
    #[arg(long)]
    pub flats: Option<PathBuf>,
    /// Flat-matrix row left out for every point.
    #[arg(long, default_value_t = 0)]
    pub omit_row: usize,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[command(flatten)]
    pub flat: FlatArgs,
    /// Matrix Market output; the sidecar goes next to it with a .json extension.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Also write the design as JSON.
    #[arg(long)]
    pub design_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub path: PathBuf,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Print the full report as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ParamsArgs {
    pub m: u64,
    pub n: u64,
}

#[derive(Debug, Args)]
pub struct AdmissibleArgs {
    pub k: u64,
    pub v: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Text,
    Csv,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long, default_value_t = 100)]
    pub max_m: u64,
    #[arg(long, value_enum, default_value_t = TableFormat::Text)]
    pub format: TableFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RipMode {
    Exhaustive,
    Gershgorin,
}

#[derive(Debug, Args)]
pub struct RipArgs {
    pub path: PathBuf,
    #[arg(long = "k")]
    pub k: usize,
    /// Largest number of subsets enumerated exhaustively.
    #[arg(long, default_value_t = 5_000_000)]
    pub budget: u64,
    /// Random subsets drawn when the budget is exceeded.
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Fail instead of sampling when the budget is exceeded.
    #[arg(long)]
    pub no_sampling: bool,
    /// Stop at the first subset whose delta reaches this value.
    #[arg(long)]
    pub early_exit: Option<f64>,
    #[arg(long, value_enum, default_value_t = RipMode::Exhaustive)]
    pub mode: RipMode,
}

#[derive(Debug, Args)]
pub struct PathArgs {
    pub path: PathBuf,
}

#[derive(Debug, Args)]
pub struct ComplementArgs {
    pub path: PathBuf,
    /// Output path; defaults to the input name with a "-complement" suffix.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ImportArgs {
    /// Steiner system JSON: {"v": .., "k": .., "blocks": [[..], ..]}.
    pub design: PathBuf,
    #[command(flatten)]
    pub flat: FlatArgs,
    #[arg(long, short)]
    pub out: PathBuf,
    /// Label stored in the sidecar.
    #[arg(long, default_value = "imported")]
    pub label: String,
}
