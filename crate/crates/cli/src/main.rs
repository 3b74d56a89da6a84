//! `gcx`: graph cochain complexes, face strata and gluing plans from the command line.

mod cache;
mod commands;
mod text;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cache::Cache;

#[derive(Parser, Debug)]
#[command(name = "gcx", version, about = "Graph cochain complexes for long links")]
pub struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Cache directory.
    #[arg(long, env = "GCX_CACHE", default_value = ".gcx-cache", global = true)]
    pub cache: PathBuf,
    /// Disable the result cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Worker threads for per-face and per-pairing work.
    #[arg(long, default_value_t = 1, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub jobs: u16,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ConventionArg {
    Odd,
    Even,
}

impl From<ConventionArg> for gcx_core::Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Odd => gcx_core::Convention::Odd,
            ConventionArg::Even => gcx_core::Convention::Even,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum RingArg {
    #[value(name = "Z")]
    Z,
    #[value(name = "Q")]
    Q,
    #[value(name = "Z2")]
    Z2,
}

impl From<RingArg> for gcx_core::Ring {
    fn from(r: RingArg) -> Self {
        match r {
            RingArg::Z => gcx_core::Ring::Z,
            RingArg::Q => gcx_core::Ring::Q,
            RingArg::Z2 => gcx_core::Ring::Z2,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Ambient,
    Fiber,
}

#[derive(Args, Debug, Clone)]
pub struct GradingArgs {
    /// Number of strands.
    #[arg(short = 'm', long)]
    pub m: usize,
    /// Order.
    #[arg(short = 'n', long, allow_hyphen_values = true)]
    pub n: i64,
    /// Defect.
    #[arg(short = 'k', long, allow_hyphen_values = true)]
    pub k: i64,
    #[arg(long, value_enum, default_value_t = ConventionArg::Odd)]
    pub convention: ConventionArg,
}

#[derive(Args, Debug, Clone)]
pub struct RingOpt {
    #[arg(long, value_enum, default_value_t = RingArg::Z)]
    pub ring: RingArg,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Canonical basis of one grading, with a manifest.
    Basis {
        #[command(flatten)]
        grading: GradingArgs,
        #[command(flatten)]
        ring: RingOpt,
    },
    /// Order and defect of a diagram.
    Grading {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Coboundary of a cochain.
    D {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Coboundary matrix from defect k to k+1.
    Matrix {
        #[command(flatten)]
        grading: GradingArgs,
        #[command(flatten)]
        ring: RingOpt,
    },
    /// Integer cohomology group: free rank and torsion.
    Cohomology {
        #[command(flatten)]
        grading: GradingArgs,
    },
    /// Spanning set of the cocycles.
    Cocycles {
        #[command(flatten)]
        grading: GradingArgs,
        #[command(flatten)]
        ring: RingOpt,
    },
    /// Support-minimal integer cocycles, of a grading or of a file of cocycles.
    Minimal {
        #[arg(long = "in", conflicts_with_all = ["m", "n", "k"])]
        input: Option<PathBuf>,
        #[arg(short = 'm', long, requires_all = ["n", "k"])]
        m: Option<usize>,
        #[arg(short = 'n', long, allow_hyphen_values = true)]
        n: Option<i64>,
        #[arg(short = 'k', long, allow_hyphen_values = true)]
        k: Option<i64>,
        #[arg(long, value_enum, default_value_t = ConventionArg::Odd)]
        convention: ConventionArg,
        /// Largest support searched exhaustively.
        #[arg(long, default_value_t = 18)]
        max_support: usize,
    },
    /// Consistently oriented expression of an integer cocycle.
    Orient {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Extend a partial coefficient assignment to a cocycle.
    Extend {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Codimension-one faces of a diagram.
    Faces {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Codimension certificates for the hidden and infinity faces of a diagram.
    Certify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(short = 'd', long)]
        dim: u32,
        /// Certify only this vertex set.
        #[arg(long, value_delimiter = ',')]
        vertices: Option<Vec<u32>>,
        /// Read the vertex set as a face at infinity.
        #[arg(long, requires = "vertices")]
        infinity: bool,
    },
    /// Compatible families of face sets.
    Corners {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_size: usize,
        #[arg(long)]
        include_infinity: bool,
    },
    /// Poincaré polynomial of the configuration space or the fiber.
    Poincare {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(short = 'd', long)]
        dim: u32,
        #[arg(long, value_enum, default_value_t = ModeArg::Fiber)]
        mode: ModeArg,
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<u32>>,
    },
    /// Fiber dimension, class degree and sphere dimension of a cochain.
    Dims {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(short = 'd', long)]
        dim: u32,
    },
    /// Gluing plan of an integer cocycle.
    Glue {
        #[arg(long)]
        cocycle: PathBuf,
        #[arg(short = 'd', long)]
        dim: u32,
    },
    /// Gluing plan of a mod-2 cocycle.
    GlueMod2 {
        #[arg(long)]
        cocycle: PathBuf,
        #[arg(short = 'd', long)]
        dim: u32,
    },
    /// Fold-and-collapse plan of a chord diagram in R^3.
    GlueChord {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Re-check a gluing plan.
    Verify {
        #[arg(long)]
        plan: PathBuf,
    },
    /// Spherical signatures of a plan's identifications.
    Signatures {
        #[arg(long)]
        plan: PathBuf,
    },
    /// Corner codimension changes across pairings.
    CollapseAnalysis {
        #[arg(long)]
        plan: PathBuf,
        #[arg(long)]
        pairing: Option<usize>,
    },
}

#[derive(Serialize)]
struct ErrorObject<'a> {
    error: ErrorBody<'a>,
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    message: String,
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
    let cache = Cache::new((!cli.no_cache).then(|| cli.cache.clone()));
    match commands::run(&cli, &cache) {
        Ok(report) => match emit(&cli, &report.body) {
            Ok(()) if report.ok => ExitCode::SUCCESS,
            Ok(()) => ExitCode::from(1),
            Err(e) => fail(&e),
        },
        Err(e) => fail(&e),
    }
}

fn emit(cli: &Cli, body: &commands::Body) -> Result<(), commands::CliError> {
    let s = match cli.format {
        Format::Json => body.json.clone(),
        Format::Text => body.text.clone(),
    };
    match &cli.out {
        Some(p) => std::fs::write(p, s).map_err(|source| commands::CliError::Write { path: p.clone(), source }),
        None => {
            print!("{s}");
            Ok(())
        }
    }
}

fn fail(e: &commands::CliError) -> ExitCode {
    let obj = ErrorObject { error: ErrorBody { kind: e.kind(), message: e.to_string() } };
    eprintln!("{}", serde_json::to_string(&obj).expect("error object serializes"));
    ExitCode::from(if matches!(e, commands::CliError::Usage(_)) { 2 } else { 1 })
}
