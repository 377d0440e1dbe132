//! `flatsurf`: build, inspect and transform flat surfaces from the shell.
//!
//! Surface files are read from a path or from standard input and written to
//! `--out` or standard output, so commands chain with pipes. Exit status is
//! 0 on success, 1 when the input is valid but the computation fails and 2
//! on usage errors.

mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "flatsurf",
    version,
    about = "Flat surfaces, their symmetries and periods"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write one of the built-in surfaces.
    Build(BuildArgs),
    /// Genus, cone angles and area.
    Info(Input),
    /// The Delaunay decomposition.
    Delaunay(DelaunayArgs),
    /// The isometry group of the Delaunay decomposition.
    Isometries(Input),
    /// Apply a linear map to every polygon.
    Apply(ApplyArgs),
    /// Solve for the parameters (t, u) of the Arnoux–Yoccoz curve.
    SolveAy(SolveArgs),
    /// Solve the rectangle equation for t given μ.
    SolveRect(SolveRectArgs),
    /// Period integrals and ratios.
    #[command(subcommand)]
    Periods(PeriodsCommand),
    /// Decide whether a surface is square-tiled.
    OrigamiCheck(Input),
    /// Cut along two sides of a square and reglue by half turns.
    Genus2(Genus2Args),
    /// The iso-Delaunay tessellation of the upper half-plane.
    Tessellate(TessellateArgs),
}

#[derive(Debug, Args)]
struct Input {
    /// Surface file; standard input when omitted or `-`.
    file: Option<String>,
}

#[derive(Debug, Args)]
struct Output {
    /// Where to write the surface; standard output when omitted.
    #[arg(short, long)]
    out: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Shape {
    Ay,
    AyPrime,
    Trapezoid,
    Parallelogram,
    Escalator,
    Rectangle,
    Torus,
}

#[derive(Debug, Args)]
struct BuildArgs {
    shape: Shape,
    /// Short base of the trapezoid.
    #[arg(long)]
    b: Option<String>,
    /// Long base of the trapezoid.
    #[arg(long = "B")]
    big_b: Option<String>,
    /// Height of the trapezoid.
    #[arg(long)]
    h: Option<String>,
    #[arg(long)]
    s1x: Option<String>,
    #[arg(long)]
    s1y: Option<String>,
    #[arg(long)]
    s2x: Option<String>,
    #[arg(long)]
    s2y: Option<String>,
    /// Rectangle from the curve parameter t (with u = 1).
    #[arg(long, conflicts_with = "mu")]
    t: Option<f64>,
    /// Rectangle with width/height = 2μ.
    #[arg(long)]
    mu: Option<String>,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct DelaunayArgs {
    #[command(flatten)]
    input: Input,
    /// Only print the shape census.
    #[arg(long)]
    census: bool,
    /// Write the decomposition as a surface file.
    #[arg(short, long)]
    out: Option<String>,
    /// Write the decomposition as an SVG net.
    #[arg(long)]
    svg: Option<String>,
}

#[derive(Debug, Args)]
struct ApplyArgs {
    #[command(flatten)]
    input: Input,
    /// Entries `a,b,c,d` of the matrix [[a, b], [c, d]].
    #[arg(long, allow_hyphen_values = true)]
    matrix: String,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// Residual tolerance of the Newton iteration.
    #[arg(long, default_value_t = 1e-10)]
    tolerance: f64,
}

#[derive(Debug, Args)]
struct SolveRectArgs {
    #[arg(long)]
    mu: f64,
    #[arg(long, default_value_t = 1e-10)]
    tolerance: f64,
}

#[derive(Debug, Subcommand)]
enum PeriodsCommand {
    /// Segment integrals J1, J2, J3 and the ratios J2/J1, J3/J1.
    Ratios {
        #[arg(long)]
        t: f64,
        #[arg(long)]
        u: f64,
    },
    /// Period ratio of y² = x(x² − 1)(x − a)(x − 1/a).
    Silhol {
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        a_real: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        a_imag: f64,
        /// Pass branch points on the real segments from above.
        #[arg(long)]
        detour: bool,
    },
}

#[derive(Debug, Args)]
struct Genus2Args {
    #[command(flatten)]
    input: Input,
    /// Index of the square polygon.
    #[arg(long, default_value_t = 0)]
    square: usize,
    /// Which pair of opposite sides to cut: horizontal or vertical.
    #[arg(long, default_value = "horizontal")]
    axis: String,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct TessellateArgs {
    #[command(flatten)]
    input: Input,
    /// Hyperbolic radius of the explored ball.
    #[arg(long)]
    radius: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    center_x: f64,
    #[arg(long, default_value_t = 1.0)]
    center_y: f64,
    #[arg(long)]
    svg: Option<String>,
    #[arg(long)]
    json: Option<String>,
    #[arg(long, default_value_t = flatsurf_core::isodelaunay::CELL_BUDGET)]
    budget: usize,
}

/// Failure of a command, with the exit status it maps to.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(String),
}

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Domain(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Domain(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
