use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Leading-digit laws of Lie group components and sphere coordinates.
#[derive(Debug, Parser)]
#[command(name = "haar-digits", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate a digit law on a 99-point significand grid.
    Law(LawArgs),
    /// Sample a group component and test it against its predicted law.
    Sample(SampleArgs),
    /// First-digit frequencies of sphere coordinates across dimensions.
    Fig1(Fig1Args),
    /// Run the adjoint-determinant and cone-volume checks.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Options shared by every command.
#[derive(Debug, Args)]
pub struct Common {
    /// Radix B of the significand.
    #[arg(long, default_value_t = 10)]
    pub base: u32,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Options of the Monte Carlo commands.
#[derive(Debug, Args)]
pub struct Mc {
    #[arg(long, env = "HAAR_DIGITS_SEED", default_value_t = 42)]
    pub seed: u64,
    /// Number of RNG streams (and threads); output depends on it.
    #[arg(long, default_value_t = 4)]
    pub workers: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LawKind {
    Benford,
    Power,
    Uniform,
    SphereExact,
    SphereErf,
    SphereLimit,
}

#[derive(Debug, Args)]
pub struct LawArgs {
    #[arg(long, value_enum)]
    pub law: LawKind,
    /// Power-law exponent (power only).
    #[arg(long)]
    pub k: Option<f64>,
    /// Sphere dimension of S^n (sphere laws only).
    #[arg(long)]
    pub n: Option<u64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Group {
    Rplus,
    Power,
    Triangular,
    Diagonal,
    Sln,
    GlnDet,
    Orthogonal,
    Unitary,
    Sphere,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Part {
    Re,
    Im,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, value_enum)]
    pub group: Group,
    /// Matrix size, or the dimension of S^n for the sphere group.
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of draws.
    #[arg(long = "N", default_value_t = 100_000)]
    pub count: usize,
    /// 1-based matrix entry `i,j`.
    #[arg(long)]
    pub entry: Option<String>,
    /// Power-law exponent (power group).
    #[arg(long)]
    pub k: Option<f64>,
    /// Half-width of the unipotent window.
    #[arg(long, default_value_t = 1.0)]
    pub eps: f64,
    /// Decades spanned by diagonal and radial coordinates.
    #[arg(long, default_value_t = 3)]
    pub m: u32,
    /// Attach random signs to diagonal entries.
    #[arg(long)]
    pub random_signs: bool,
    /// Haar measure of the triangular group.
    #[arg(long, value_enum, default_value_t = SideArg::Left)]
    pub side: SideArg,
    /// Restrict the diagonal group to determinant one.
    #[arg(long)]
    pub det_one: bool,
    /// Apply random even row and column permutations (sln).
    #[arg(long)]
    pub permute: bool,
    /// Real or imaginary part (unitary).
    #[arg(long, value_enum, default_value_t = Part::Re)]
    pub part: Part,
    /// Significance level of the goodness-of-fit tests.
    #[arg(long, default_value_t = 0.001)]
    pub alpha: f64,
    /// Also write the sampled values as CSV.
    #[arg(long)]
    pub samples: Option<PathBuf>,
    #[command(flatten)]
    pub mc: Mc,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Fig1Args {
    /// Sphere dimensions n of S^n.
    #[arg(long, value_delimiter = ',', default_value = "100,200,500,10000,20000,50000")]
    pub dims: Vec<u64>,
    /// Draws per dimension.
    #[arg(long = "N", default_value_t = 100_000)]
    pub count: usize,
    #[command(flatten)]
    pub mc: Mc,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Adjoint,
    Cone,
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    /// Half-width of the (b, c) box of the cone problem.
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    /// Monte Carlo trials for the cone volume.
    #[arg(long, default_value_t = 10_000_000)]
    pub trials: u64,
    /// Random (u, d) pairs per matrix size.
    #[arg(long, default_value_t = 100)]
    pub pairs: usize,
    #[command(flatten)]
    pub mc: Mc,
    #[command(flatten)]
    pub common: Common,
}
