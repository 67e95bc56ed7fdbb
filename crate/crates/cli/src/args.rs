use clap::{Args, Parser, Subcommand, ValueEnum};
use mdca_core::{Lambda, Method};
use serde::Deserialize;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "mdca",
    version,
    about = "Curvature estimation on digitized planar shapes from maximal digital circular arcs",
    after_help = "Exit status: 0 on success, 2 on usage errors, 1 when a pipeline stage fails."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Gauss-discretize a shape, or load a binary image, and write the pixel set.
    Rasterize(StageArgs),
    /// Trace the boundary of the largest 4-connected component.
    Trace(StageArgs),
    /// Compute the maximal digital circular arcs of the boundary.
    Mdca(StageArgs),
    /// Estimate the curvature of every boundary edge.
    Curvature(CurvatureArgs),
    /// Compare both estimators with the exact curvature over a range of pixel sizes.
    Convergence(ConvergenceArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Rasterize(_) => "rasterize",
            Command::Trace(_) => "trace",
            Command::Mdca(_) => "mdca",
            Command::Curvature(_) => "curvature",
            Command::Convergence(_) => "convergence",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Builtin shape: ellipse, gummybear, hourglass, rhombus or disk:<radius>.
    #[arg(long, conflicts_with = "image")]
    pub shape: Option<String>,
    /// Binary PBM/PGM image (P1, P2, P4 or P5); dark pixels are foreground.
    #[arg(long)]
    pub image: Option<PathBuf>,
    /// JSON file with any of the options below; command-line flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file [default: standard output].
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Output format [default: json].
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Args)]
pub struct StageArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Pixel size [default: 1].
    #[arg(long)]
    pub h: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CurvatureArgs {
    #[command(flatten)]
    pub stage: StageArgs,
    /// Estimator to report [default: both].
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    /// Eccentricity weight of the lambda-mdca estimator [default: entropy].
    #[arg(long, value_enum)]
    pub lambda: Option<LambdaArg>,
}

#[derive(Debug, Clone, Args)]
pub struct ConvergenceArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Comma-separated pixel sizes [default: 1,0.5,...,0.015625].
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub resolutions: Option<Vec<f64>>,
    /// Estimator to report [default: both].
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    /// Eccentricity weight of the lambda-mdca estimator [default: entropy].
    #[arg(long, value_enum)]
    pub lambda: Option<LambdaArg>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    #[default]
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Mdca,
    LambdaMdca,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Mdca => Method::Mdca,
            MethodArg::LambdaMdca => Method::LambdaMdca,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LambdaArg {
    Entropy,
    Parabola,
}

impl From<LambdaArg> for Lambda {
    fn from(l: LambdaArg) -> Self {
        match l {
            LambdaArg::Entropy => Lambda::Entropy,
            LambdaArg::Parabola => Lambda::Parabola,
        }
    }
}
