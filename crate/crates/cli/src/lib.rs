//! The `mbe` command line tool.

use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mbe_core::{IeMode, SizeConstraints, Tier};

mod bench;
mod commands;
mod io;
mod report;

pub use report::{digest_line, RunReport, StatsReport};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_IO: u8 = 2;
pub const EXIT_TRUNCATED: u8 = 3;
pub const EXIT_DIFF: u8 = 4;

/// Errors that select a specific exit status.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "mbe", version, about = "Maximal biclique enumeration on bipartite graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate maximal bicliques and stream them out.
    Enumerate(EnumerateArgs),
    /// Print the number of maximal bicliques.
    Count(EnumerateArgs),
    /// Write a generated graph in KONECT format.
    Generate(GenerateArgs),
    /// Compare the enumerator against the brute-force oracle.
    Verify(VerifyArgs),
    /// Run a benchmark suite and write a report.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct SourceArgs {
    /// KONECT edge list.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Generator spec: crown:H, random:LxR:P:seedS or biplex:LxR:seedS.
    #[arg(long)]
    pub gen: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct AlgoArgs {
    #[arg(long, value_enum, default_value_t = AlgoArg::Ips)]
    pub algo: AlgoArg,
    #[arg(long, value_enum, default_value_t = IeArg::Off)]
    pub ie: IeArg,
    #[arg(long, default_value_t = 1)]
    pub tau_l: usize,
    #[arg(long, default_value_t = 1)]
    pub tau_r: usize,
}

impl AlgoArgs {
    pub fn constraints(&self) -> Result<SizeConstraints, CliError> {
        SizeConstraints::new(self.tau_l, self.tau_r).map_err(|e| CliError::Usage(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgoArg {
    Basic,
    Bps,
    Ips,
}

impl From<AlgoArg> for Tier {
    fn from(a: AlgoArg) -> Tier {
        match a {
            AlgoArg::Basic => Tier::Basic,
            AlgoArg::Bps => Tier::Bps,
            AlgoArg::Ips => Tier::Ips,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IeArg {
    Off,
    Arbitrary,
    Degree,
    Degeneracy,
    Unilateral,
}

impl From<IeArg> for IeMode {
    fn from(a: IeArg) -> IeMode {
        match a {
            IeArg::Off => IeMode::Off,
            IeArg::Arbitrary => IeMode::Arbitrary,
            IeArg::Degree => IeMode::Degree,
            IeArg::Degeneracy => IeMode::Degeneracy,
            IeArg::Unilateral => IeMode::Unilateral,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Lines,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct EnumerateArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub algo: AlgoArgs,
    /// Output path, `-` for stdout.
    #[arg(long, default_value = "-")]
    pub output: String,
    #[arg(long, value_enum, default_value_t = OutputFormat::Lines)]
    pub format: OutputFormat,
    /// Print only the number of results.
    #[arg(long)]
    pub count_only: bool,
    /// Stop after this many results.
    #[arg(long)]
    pub limit: Option<u64>,
    /// Wall-clock budget in seconds, checked once per branch.
    #[arg(long)]
    pub time_budget: Option<f64>,
    /// Write a JSON run report here.
    #[arg(long)]
    pub stats: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GenerateArgs {
    /// Generator spec: crown:H, random:LxR:P:seedS or biplex:LxR:seedS.
    pub spec: String,
    #[arg(long, default_value = "-")]
    pub output: String,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, conflicts_with = "gen")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub gen: Option<String>,
    #[command(flatten)]
    pub algo: AlgoArgs,
    /// Number of random graphs to check instead of a single input.
    #[arg(long, conflicts_with_all = ["input", "gen"])]
    pub trials: Option<u32>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Drop one enumerator result before comparing (harness self-test).
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// File with one dataset path or generator spec per line.
    #[arg(long)]
    pub suite: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "basic,bps,ips")]
    pub algos: Vec<AlgoArg>,
    #[arg(long, value_delimiter = ',', default_value = "off")]
    pub ie: Vec<IeArg>,
    #[arg(long, default_value_t = 5)]
    pub repeats: u32,
    #[arg(long, default_value_t = 1)]
    pub tau_l: usize,
    #[arg(long, default_value_t = 1)]
    pub tau_r: usize,
    /// Per-run wall-clock budget in seconds.
    #[arg(long)]
    pub time_budget: Option<f64>,
    /// Report path, `-` for stdout.
    #[arg(long, default_value = "-")]
    pub report: String,
    #[arg(long, value_enum, default_value_t = ReportFormat::Csv)]
    pub format: ReportFormat,
}

/// Runs a parsed command line and returns the exit status.
pub fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Enumerate(a) => commands::enumerate(&a, false),
        Command::Count(a) => commands::enumerate(&a, true),
        Command::Generate(a) => commands::generate(&a),
        Command::Verify(a) => commands::verify(&a),
        Command::Bench(a) => bench::bench(&a),
    }
}

/// Maps an error from [`run`] to its exit status.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    if let Some(e) = err.downcast_ref::<CliError>() {
        return e.code();
    }
    match err.downcast_ref::<mbe_core::GraphError>() {
        Some(mbe_core::GraphError::InvalidArgument(_)) => EXIT_USAGE,
        _ => EXIT_IO,
    }
}
