//! Command-line arguments.

use std::path::PathBuf;

use clap::{Args as ClapArgs, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "hemifrustum",
    version,
    about = "Curved surface area of a hemiellipsoid frustum, its special functions, and a quadrature cross-check"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub global: GlobalOpts,
}

#[derive(Debug, Clone, ClapArgs)]
pub struct GlobalOpts {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Relative tolerance of every series.
    #[arg(long, default_value_t = 1e-12, global = true)]
    pub rel_tol: f64,

    /// Term budget per series (total degree for double and triple series).
    #[arg(long, global = true)]
    pub max_terms: Option<usize>,

    /// Also write the report to this file.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Closed,
    Quadrature,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Sign {
    Negative,
    Positive,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form curved area from cutting heights or plane fractions.
    Area(AreaArgs),
    /// Compare the closed form with direct quadrature.
    Verify(VerifyArgs),
    /// Appell's double series F2.
    #[command(name = "eval-f2")]
    EvalF2(F2Args),
    /// Srivastava's triple series F(3).
    #[command(name = "eval-f3")]
    EvalF3(Box<F3Args>),
    /// Gauss's 2F1.
    #[command(name = "eval-2f1")]
    Eval2F1(Gauss2F1Args),
    /// Angular or radial integrals, closed form and/or quadrature.
    #[command(subcommand)]
    Integral(IntegralCommand),
}

#[derive(Debug, Clone, ClapArgs)]
pub struct Axes {
    #[arg(long, allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub b: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub c: f64,
}

#[derive(Debug, Clone, ClapArgs)]
pub struct AreaArgs {
    #[command(flatten)]
    pub axes: Axes,
    /// Lower cutting height.
    #[arg(long = "h", allow_negative_numbers = true, requires = "upper", conflicts_with_all = ["beta", "gamma"])]
    pub lower: Option<f64>,
    /// Upper cutting height.
    #[arg(long = "H", allow_negative_numbers = true, requires = "lower")]
    pub upper: Option<f64>,
    /// Plane fraction sqrt(1 - H^2/c^2) of the upper plane.
    #[arg(long, allow_negative_numbers = true, requires = "gamma")]
    pub beta: Option<f64>,
    /// Plane fraction sqrt(1 - h^2/c^2) of the lower plane.
    #[arg(long, allow_negative_numbers = true, requires = "beta")]
    pub gamma: Option<f64>,
    /// Sign of the third triple-series argument; only `negative` matches
    /// the surface integral.
    #[arg(long, value_enum, default_value_t = Sign::Negative)]
    pub sign: Sign,
}

#[derive(Debug, Clone, ClapArgs)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub axes: Axes,
    #[arg(long = "h", allow_negative_numbers = true)]
    pub lower: f64,
    #[arg(long = "H", allow_negative_numbers = true)]
    pub upper: f64,
    /// Largest accepted relative deviation.
    #[arg(long, default_value_t = 1e-6)]
    pub verify_tol: f64,
}

#[derive(Debug, Clone, ClapArgs)]
pub struct F2Args {
    #[arg(long, allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub b: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub c: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub d: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub g: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub x: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub y: f64,
}

/// Parameter groups are comma-separated lists; `p` marks a prime, so
/// `--bpp` is the `b''` group (weight `m + p`).
#[derive(Debug, Clone, ClapArgs)]
pub struct F3Args {
    /// Use the parameter set of the area formula instead of the groups.
    #[arg(long)]
    pub frustum_params: bool,
    /// Sum the shells only (no analytic continuation in z).
    #[arg(long)]
    pub shells: bool,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub a: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub b: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub bp: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub bpp: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub c: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub cp: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub cpp: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub e: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub g: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub gp: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub gpp: Vec<f64>,
    #[arg(long = "h", value_delimiter = ',', allow_negative_numbers = true)]
    pub h: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub hp: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub hpp: Vec<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub x: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub y: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub z: f64,
}

#[derive(Debug, Clone, ClapArgs)]
pub struct Gauss2F1Args {
    #[arg(long, allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub b: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub c: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub z: f64,
}

#[derive(Debug, Subcommand)]
pub enum IntegralCommand {
    /// (cos^2 t / sigma^2 + sin^2 t / lambda^2)^s over a full turn.
    Angular(AngularArgs),
    /// r^(2s+1) (1 - r^2)^(-s) from beta to gamma.
    Radial(RadialArgs),
}

#[derive(Debug, Clone, ClapArgs)]
pub struct AngularArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub sigma: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub s: f64,
    #[arg(long, value_enum, default_value_t = Method::Closed)]
    pub method: Method,
    /// Relative tolerance of the quadrature.
    #[arg(long, default_value_t = 1e-12)]
    pub quad_tol: f64,
}

#[derive(Debug, Clone, ClapArgs)]
pub struct RadialArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub beta: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub s: f64,
    #[arg(long, value_enum, default_value_t = Method::Closed)]
    pub method: Method,
    /// Relative tolerance of the quadrature.
    #[arg(long, default_value_t = 1e-12)]
    pub quad_tol: f64,
}
