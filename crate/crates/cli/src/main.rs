use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Parser, Debug)]
#[command(
    name = "polyconnect",
    version,
    about = "Connections of standard-form polyhedra: vertices, skeletons, walks and bound checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by every subcommand.
#[derive(clap::Args, Debug, Clone)]
pub struct Common {
    /// Input file; repeat for commands taking several.
    #[arg(long, short = 'i')]
    pub input: Vec<PathBuf>,
    /// Output file (stdout when absent).
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
    /// Raise the basis-count guardrail (also lifts the column limit).
    #[arg(long)]
    pub max_bases: Option<u128>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parallel or series connection of two linked-form instance files.
    Connect {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        kind: GlueArg,
        /// Link column of the first matrix (default: last).
        #[arg(long)]
        link_a: Option<usize>,
        /// Link column of the second matrix (default: first).
        #[arg(long)]
        link_b: Option<usize>,
        #[arg(long, value_enum, default_value_t = TextFormat::Text)]
        format: TextFormat,
    },
    /// Vertex list of an instance.
    Vertices {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = TableFormat::Json)]
        format: TableFormat,
    },
    /// Vertices and edges of an instance.
    Skeleton {
        #[command(flatten)]
        common: Common,
        /// Perturb to a simple instance first.
        #[arg(long)]
        perturb: bool,
    },
    /// Combinatorial diameter, or a sampled lower bound over right-hand sides.
    Diameter {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        perturb: bool,
        /// Sample this many right-hand sides of the matrix instead.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = TextFormat::Text)]
        format: TextFormat,
    },
    /// Basis split of every vertex of a connection instance (CSV).
    Classify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        perturb: bool,
    },
    /// Constructive walk between two vertices (JSON).
    Walk {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        mode: WalkMode,
        /// Vertex index or comma-separated coordinates.
        #[arg(long)]
        from: String,
        /// Vertex index or comma-separated coordinates.
        #[arg(long)]
        to: Option<String>,
        #[arg(long, value_enum, default_value_t = DirectionArg::Max)]
        direction: DirectionArg,
        /// Objective column for `smonotone` on plain instances.
        #[arg(long)]
        column: Option<usize>,
        #[arg(long)]
        perturb: bool,
        /// Treat the instance as Hirsch-verified (series bound variant).
        #[arg(long)]
        hirsch: bool,
    },
    /// Bound-verification campaign.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Corpus source; ignored when `--input` files are given.
        #[arg(long, value_enum, default_value_t = CorpusArg::Standard)]
        corpus: CorpusArg,
        /// Block sizes `m1,n1,m2,n2` (cube: dimension first).
        #[arg(long, default_value = "2,3,2,3")]
        sizes: String,
        #[arg(long, default_value_t = 1)]
        draws: usize,
        #[arg(long, default_value_t = 5)]
        rhs_samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated check names, or `all`.
        #[arg(long, default_value = "all")]
        checks: String,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
        /// Record runtime per row (makes reports run-dependent).
        #[arg(long)]
        timings: bool,
        /// Mark file instances as Hirsch-verified.
        #[arg(long)]
        hirsch: bool,
    },
    /// Glue two digraphs on marked arcs (the worked example when no input).
    Graphic {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        kind: GlueArg,
        #[arg(long, default_value = "p1")]
        p1: String,
        #[arg(long, default_value = "p2")]
        p2: String,
        #[arg(long, value_enum, default_value_t = GraphFormat::Digraph)]
        format: GraphFormat,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum GlueArg {
    Parallel,
    Series,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum TextFormat {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    Digraph,
    Matrix,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum WalkMode {
    Parallel,
    Series,
    Nonrevisiting,
    Smonotone,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum DirectionArg {
    Max,
    Min,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorpusArg {
    Standard,
    RandomLinked,
    Graphic,
    Fig1,
    Cube,
}

/// Process outcome: everything checked out, or a bound was violated.
pub enum Outcome {
    Ok,
    Violation,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = commands::configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    match commands::run(cli.command) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Violation) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
