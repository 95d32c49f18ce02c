use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod compute;
mod report;
mod run;

/// Connections, torsions and curvatures of Finsler metrics, with an identity checker.
#[derive(Parser)]
#[command(name = "finsler", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check catalog identities at seeded sample points.
    Check(CheckArgs),
    /// Print one geometric object at a point.
    Compute(ComputeArgs),
    /// List or validate metrics.
    Metrics {
        #[command(subcommand)]
        command: MetricsCommand,
    },
    /// Print the identity catalog as a markdown table.
    Catalog,
}

#[derive(Subcommand)]
enum MetricsCommand {
    /// Builtin families and their parameters.
    List,
    /// Check homogeneity and positive definiteness at sampled points.
    Validate {
        #[command(flatten)]
        metric: MetricArgs,
        #[arg(long, default_value_t = 64)]
        points: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args, Clone)]
pub struct MetricArgs {
    /// `builtin:NAME`, `expr:EXPRESSION`, or a path to a JSON metric file.
    #[arg(long)]
    pub metric: String,
    /// Manifold dimension; taken from the file for file metrics.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Family parameters as a JSON object (builtin metrics only).
    #[arg(long)]
    pub params: Option<String>,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum Precision {
    F64,
    F32,
}

#[derive(Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub metric: MetricArgs,
    /// Jet truncation order.
    #[arg(long, default_value_t = finsler_core::geometry::DEFAULT_ORDER)]
    pub order: usize,
    #[arg(long, default_value_t = 20)]
    pub points: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Relative residual tolerance.
    #[arg(long, default_value_t = finsler_core::identities::DEFAULT_TOL)]
    pub tol: f64,
    /// Glob patterns over identity ids, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub ids: Vec<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long, value_enum, default_value = "f64")]
    pub precision: Precision,
}

#[derive(Args)]
pub struct ComputeArgs {
    #[command(flatten)]
    pub metric: MetricArgs,
    /// g, g_inv, C, spray, N, dN, H, V, Q, T, Rhat, Phat, Shat, R, P, S, H-tensor, barthel.
    #[arg(long)]
    pub object: String,
    #[arg(long, default_value = "cartan")]
    pub connection: finsler_core::ConnectionKind,
    /// `x=a,b,..;y=c,d,..`
    #[arg(long)]
    pub point: String,
    /// Covariant derivative of the object along the given direction.
    #[arg(long, value_enum)]
    pub derivative: Option<compute::DerivativeDir>,
    #[arg(long, default_value_t = finsler_core::geometry::DEFAULT_ORDER)]
    pub order: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Check(args) => run::check(&args),
        Command::Compute(args) => compute::run(&args).map(|_| true),
        Command::Metrics { command } => match command {
            MetricsCommand::List => {
                run::list_metrics();
                Ok(true)
            }
            MetricsCommand::Validate { metric, points, seed } => run::validate(&metric, points, seed),
        },
        Command::Catalog => {
            print!("{}", finsler_core::coverage_manifest());
            Ok(true)
        }
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
