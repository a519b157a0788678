//! Command-line driver: amplitudes, cross-engine verification, timing
//! tables and circuit-to-pattern compilation. All tabular output is CSV.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub mod bench;
pub mod compile;
pub mod config;
pub mod engine;
pub mod error;
pub mod project;
pub mod verify;

pub use engine::{EngineKind, OrderArg};
pub use error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "latticeproj",
    version,
    about = "Local projections on cluster states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print one amplitude as `re im`.
    Project(ProjectArgs),
    /// Compare engines over random trials; exits 1 past the tolerance.
    Verify(VerifyArgs),
    /// Time engines over random trials, or profile live terms across widths.
    Bench(BenchArgs),
    /// Turn a gate list into pattern files.
    Compile(CompileArgs),
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Graph file: a qubit count, then one `a b` edge per line.
    #[arg(long = "graph", value_name = "PATH")]
    pub graphs: Vec<PathBuf>,
    /// `line:N`, `cross:K`, `lattice:MxN` (crosses) or `grid:RxC` (square grid).
    #[arg(long = "builder", value_name = "SPEC")]
    pub builders: Vec<String>,
}

#[derive(Debug, Args)]
pub struct AngleArgs {
    /// `all:THETA,PHI` or a file of `theta phi` lines.
    #[arg(long, conflicts_with = "random")]
    pub angles: Option<String>,
    /// Draw angles uniformly from [0, 2π).
    #[arg(long)]
    pub random: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl AngleArgs {
    pub fn source(&self, required: bool) -> Result<config::AngleSource, CliError> {
        match (&self.angles, self.random) {
            (Some(a), _) => config::AngleSource::parse(a),
            (None, true) => Ok(config::AngleSource::Random { seed: self.seed }),
            (None, false) if !required => Ok(config::AngleSource::Random { seed: self.seed }),
            (None, false) => Err(CliError::Config("give --angles or --random".into())),
        }
    }
}

#[derive(Debug, Args)]
pub struct ProjectArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub angles: AngleArgs,
    #[arg(long, value_enum, default_value = "sweep")]
    pub engine: EngineKind,
    #[arg(long, value_enum, default_value = "auto")]
    pub order: OrderArg,
    /// Decimal places printed.
    #[arg(long, default_value_t = 10)]
    pub digits: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub angles: AngleArgs,
    #[arg(long, default_value_t = 31)]
    pub trials: u64,
    /// Engines to compare; all applicable ones when omitted.
    #[arg(long = "engine", value_enum)]
    pub engines: Vec<EngineKind>,
    #[arg(long, value_enum, default_value = "auto")]
    pub order: OrderArg,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 25)]
    pub trials: u64,
    #[arg(long = "engine", value_enum)]
    pub engines: Vec<EngineKind>,
    #[arg(long, value_enum, default_value = "auto")]
    pub order: OrderArg,
    /// Live-term table over lattices of crosses instead of timings.
    #[arg(long)]
    pub width_sweep: bool,
    #[arg(long, default_value_t = 2)]
    pub height: usize,
    /// Inclusive width range `A..B`.
    #[arg(long, default_value = "2..6")]
    pub widths: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompileArgs {
    /// One gate per line: RZ q θ, RX q θ, H q, CZ a b, CNOT a b, CPHASE a b θ.
    #[arg(long)]
    pub circuit: PathBuf,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// Stem of the written files.
    #[arg(long, default_value = "pattern")]
    pub name: String,
    /// Bare gate patterns without by-product corrections.
    #[arg(long)]
    pub native: bool,
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Project(a) => project::run(&a),
        Command::Verify(a) => verify::run(&a),
        Command::Bench(a) => bench::run(&a),
        Command::Compile(a) => compile::run(&a),
    }
}

/// CSV writer on `path`, or stdout.
pub(crate) fn csv_writer(
    path: Option<&PathBuf>,
) -> Result<csv::Writer<Box<dyn std::io::Write>>, CliError> {
    let sink: Box<dyn std::io::Write> = match path {
        Some(p) => Box::new(std::fs::File::create(p).map_err(CliError::io(p))?),
        None => Box::new(std::io::stdout().lock()),
    };
    Ok(csv::Writer::from_writer(sink))
}
