use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Parser)]
#[command(name = "lcr", version, about = "List-coloring reconfiguration tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the target coloring is reachable from the source.
    Solve(SolveArgs),
    /// Apply the list normalization and write the reduced instance.
    Normalize {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compile a shortest-path rerouting instance into a coloring instance.
    Reduce(ReduceArgs),
    /// Check colorings, sequences, decompositions and threshold structure.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Generate seeded random instances.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Exhaustive reconfiguration graph statistics.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Run a batch experiment config and write CSV.
    Experiments {
        config: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Auto,
    Caterpillar,
    Bruteforce,
}

#[derive(Args)]
struct SolveArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    algo: AlgoArg,
    /// Print a recoloring sequence after YES (exhaustive search only).
    #[arg(long)]
    witness: bool,
    /// Dump every encoding graph of the caterpillar DP after the answer.
    #[arg(long)]
    trace: bool,
    /// Bound on the product of list sizes for exhaustive search.
    #[arg(long, default_value_t = lcr_core::oracle::DEFAULT_STATE_CAP)]
    cap: u64,
    /// Print per-component details to stderr.
    #[arg(long)]
    report: bool,
}

#[derive(Args)]
struct ReduceArgs {
    file: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Emit the threshold-graph variant instead.
    #[arg(long)]
    threshold: bool,
    #[arg(long, value_name = "DECFILE")]
    emit_decomposition: Option<PathBuf>,
    #[arg(long, value_name = "MAPFILE")]
    emit_colormap: Option<PathBuf>,
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Check that both endpoint colorings are proper list colorings.
    Coloring { file: PathBuf },
    /// Check a recoloring sequence (`r <v> <c>` lines) against an instance.
    Sequence { file: PathBuf, sequence: PathBuf },
    /// Check a path decomposition (`b <v...>` lines) of a graph or instance.
    Decomposition { file: PathBuf, decomposition: PathBuf },
    /// Decide whether the graph is a threshold graph and print weights.
    Threshold { file: PathBuf },
}

#[derive(Subcommand)]
enum GenCommand {
    /// A random caterpillar with normalized lists.
    Caterpillar {
        #[arg(long, default_value_t = 4)]
        spine_len: usize,
        #[arg(long, default_value_t = 0)]
        leaves_min: usize,
        #[arg(long, default_value_t = 2)]
        leaves_max: usize,
        #[arg(long, short = 'k', default_value_t = 4)]
        colors: u32,
        #[arg(long, default_value_t = 2)]
        list_min: usize,
        #[arg(long, default_value_t = 3)]
        list_max: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// A layered shortest-path rerouting instance.
    Layered {
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, default_value_t = 3)]
        width: usize,
        #[arg(long, default_value_t = 0.5)]
        edge_prob: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Node, edge and component counts of the reconfiguration graph.
    Stats {
        file: PathBuf,
        #[arg(long, default_value_t = lcr_core::oracle::DEFAULT_STATE_CAP)]
        cap: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
