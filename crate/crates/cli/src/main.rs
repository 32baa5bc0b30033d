mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gbc_core::coords::CoordinateKind;
use gbc_core::Vec2;

/// Mean value and Wachspress coordinates on convex polygons.
#[derive(Debug, Parser)]
#[command(name = "gbc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Coordinates and gradients at points, on a grid, or a gradient scan.
    Eval(EvalArgs),
    /// Shape constants of a polygon and the aspect-ratio/edge-length tests.
    CheckPolygon(CheckArgs),
    /// Largest gradient norms on the pentagon family for both coordinates.
    PentagonStudy(PentagonArgs),
    /// Poisson convergence study on the unit square.
    Converge(ConvergeArgs),
    /// Randomized audit of the coordinate and geometry properties.
    Properties(PropertiesArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    #[value(alias = "markdown")]
    Md,
    Json,
}

#[derive(Debug, Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long)]
    polygon: PathBuf,
    #[arg(long, default_value = "mvc", value_parser = parse_kind)]
    kind: CoordinateKind,
    /// Evaluation point `x,y`; may be repeated.
    #[arg(long = "point", value_parser = parse_point, allow_hyphen_values = true)]
    points: Vec<Vec2>,
    /// Evaluate at the cell centres of an `n x n` grid over the bounding box.
    #[arg(long)]
    grid: Option<usize>,
    /// Report per-vertex maxima of the gradient norm over the grid instead.
    #[arg(long)]
    scan: bool,
    /// Smallest boundary distance of scanned points.
    #[arg(long, default_value_t = 1e-4)]
    margin: f64,
    /// With `--scan`, also write every scanned point to this CSV file.
    #[arg(long)]
    dump: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[arg(long)]
    polygon: PathBuf,
    #[arg(long, default_value_t = 6.0)]
    gamma_star: f64,
    #[arg(long, default_value_t = 0.1)]
    d_star: f64,
    #[arg(long, value_enum, default_value_t = Format::Md)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PentagonArgs {
    /// Apex heights, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [1.5, 1.1, 1.01, 1.001])]
    apex: Vec<f64>,
    #[arg(long, default_value_t = 256)]
    grid: usize,
    #[arg(long, default_value_t = 1e-4)]
    margin: f64,
    /// Directory for per-point gradient surfaces, one CSV per apex and kind.
    #[arg(long)]
    dump: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FieldName {
    /// sin(x) e^y
    SinExp,
    X2,
    Xy,
    Y2,
    /// 1 + 2x - y
    Affine,
}

#[derive(Debug, Args)]
struct ConvergeArgs {
    /// Mesh sizes, comma separated and increasing.
    #[arg(long, value_delimiter = ',', default_values_t = gbc_core::fem::DEFAULT_LEVELS)]
    levels: Vec<usize>,
    #[arg(long, value_enum, default_value_t = FieldName::SinExp)]
    field: FieldName,
    /// Write the finest mesh as JSON to this file.
    #[arg(long)]
    mesh: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct PropertiesArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    polygons: usize,
    /// Random interior points per polygon.
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    /// Replace every tolerance by this value.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value_t = 6.0)]
    gamma_star: f64,
    #[arg(long, default_value_t = 0.1)]
    d_star: f64,
    #[arg(long, value_enum, default_value_t = Format::Md)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_kind(s: &str) -> Result<CoordinateKind, String> {
    s.parse()
}

fn parse_point(s: &str) -> Result<Vec2, String> {
    let (x, y) = s.split_once(',').ok_or_else(|| format!("expected `x,y`, got `{s}`"))?;
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
    Ok(Vec2::new(num(x)?, num(y)?))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
