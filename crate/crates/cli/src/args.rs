//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "chebcontour", version, about = "Chebyshev coefficients by contour integrals")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Chebyshev coefficients a_0..a_N (or b_0..b_N) of a function.
    Coeffs(CoeffsArgs),
    /// M(rho) and condition numbers on a grid of radii.
    Cond(CondArgs),
    /// Derivatives of the truncated expansion on equispaced points.
    Diff(DiffArgs),
    /// Real roots on [-1, 1] of the expansion or one of its derivatives.
    Roots(RootsArgs),
    /// Regenerate one of the bundled experiments as CSV.
    Repro(ReproArgs),
}

#[derive(Debug, Clone, Args)]
pub struct FnArgs {
    /// Registry function name (exp, cos, cos_affine, pole, rational_runge,
    /// rational4, branch, exp2cos, poly, poly_mono).
    #[arg(long = "fn", value_name = "NAME", conflicts_with = "expr", required_unless_present = "expr")]
    pub name: Option<String>,
    /// Comma-separated registry parameters.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_name = "P,...")]
    pub param: Vec<f64>,
    /// Expression in x, e.g. "exp(x)/(x-3)".
    #[arg(long, value_name = "EXPR")]
    pub expr: Option<String>,
    /// Analyticity limit for --expr (inf allowed).
    #[arg(long, conflicts_with = "name")]
    pub rho_max: Option<f64>,
    /// auto[:TOL] | fixed:RHO | entire:MU,NU,VARSIGMA | pole:A | pole-refined:A | branch
    #[arg(long, value_name = "RULE")]
    pub radius_rule: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyKind {
    Fixed,
    Optimal,
    Auto,
}

#[derive(Debug, Clone, Args)]
pub struct StrategyArgs {
    #[arg(long, value_enum, default_value_t = StrategyKind::Optimal)]
    pub strategy: StrategyKind,
    /// Contour radius for --strategy fixed.
    #[arg(long)]
    pub rho: Option<f64>,
    /// Trapezoidal node count; per-coefficient strategies default to the
    /// node heuristic at --eps.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 1e-14)]
    pub eps: f64,
    /// Tolerance in ln(rho) for --strategy auto.
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    #[value(name = "T")]
    T,
    #[value(name = "U")]
    U,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write the table here instead of stdout.
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct CoeffsArgs {
    #[command(flatten)]
    pub func: FnArgs,
    #[arg(long = "N", value_name = "N")]
    pub big_n: usize,
    #[command(flatten)]
    pub strategy: StrategyArgs,
    #[arg(long, value_enum, default_value_t = KindArg::T)]
    pub kind: KindArg,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CondArgs {
    #[command(flatten)]
    pub func: FnArgs,
    /// Coefficient indices.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    /// LO:HI:COUNT, equispaced and inclusive.
    #[arg(long, value_name = "LO:HI:COUNT")]
    pub rho_grid: String,
    #[arg(long, value_enum, default_value_t = KindArg::T)]
    pub kind: KindArg,
    /// Nodes for the measured coefficient (oracle functions only); by
    /// default the fewest that keep aliasing below rounding at each radius.
    #[arg(long)]
    pub m: Option<usize>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct DiffArgs {
    #[command(flatten)]
    pub func: FnArgs,
    /// Degree of the expansion; polynomials default to their own degree,
    /// everything else to 100.
    #[arg(long = "N", value_name = "N")]
    pub big_n: Option<usize>,
    #[command(flatten)]
    pub strategy: StrategyArgs,
    /// Derivative orders.
    #[arg(long, value_delimiter = ',', required = true)]
    pub s: Vec<usize>,
    /// Number of equispaced evaluation points on [-1, 1].
    #[arg(long, default_value_t = 100)]
    pub points: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct RootsArgs {
    #[command(flatten)]
    pub func: FnArgs,
    #[arg(long = "N", value_name = "N")]
    pub big_n: Option<usize>,
    #[command(flatten)]
    pub strategy: StrategyArgs,
    /// Derivative order whose roots are wanted.
    #[arg(long, default_value_t = 0)]
    pub s: usize,
    /// Also run the fixed rho = 1 strategy.
    #[arg(long)]
    pub compare: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Experiment {
    FigCondEntire,
    FigCondPole,
    FigAbsRelExp,
    FigAbsRelPole,
    FigRelopt,
    FigDiffExp,
    FigDiffCos,
    FigDiffRat4,
    FigRootsExp2cos,
    ExMEpsilon,
}

#[derive(Debug, Clone, Args)]
pub struct ReproArgs {
    #[arg(value_enum)]
    pub id: Experiment,
    #[command(flatten)]
    pub out: OutputArgs,
}
