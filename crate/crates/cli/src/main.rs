//! `metasketch`: generate or load a graph, partition it, build the meta-graph,
//! simulate PageRank / BFS and check the results against the analytical
//! bounds. Every stage reads and writes files in one output directory.
//!
//! Exit codes: 0 success, 1 validation failure, 2 usage or input error.

mod artifacts;
mod commands;
mod generator;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use metasketch::{Strategy, DEFAULT_BALANCE_FACTOR, DEFAULT_DAMPING, DEFAULT_ITERATIONS};

use generator::GeneratorSpec;

#[derive(Parser)]
#[command(
    name = "metasketch",
    version,
    about = "Partition graphs, sketch meta-graphs and simulate BSP analytics"
)]
struct Cli {
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct OutDir {
    /// Directory holding the run's artifacts.
    #[arg(long, env = "METASKETCH_OUT", value_name = "DIR")]
    out: PathBuf,
}

#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
struct InputArgs {
    /// Edge list file (`u v` per line, `#` comments).
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,

    /// Synthetic graph: grid:WxH, powerlaw:N,A, gnm:N,M, path:N, cycle:N,
    /// star:LEAVES or complete:N.
    #[arg(long, value_name = "SPEC")]
    generate: Option<GeneratorSpec>,
}

#[derive(Args, Clone)]
struct PartitionArgs {
    /// dp, fp, hp or ha.
    #[arg(long, value_parser = parse_strategy)]
    strategy: Strategy,

    #[arg(long)]
    machines: usize,

    /// Cores per machine.
    #[arg(long, default_value_t = 1)]
    cores: usize,

    #[arg(long, default_value_t = DEFAULT_BALANCE_FACTOR)]
    balance_factor: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgoArg {
    Pr,
    Bfs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Vertex,
    Subgraph,
    Both,
}

#[derive(Args, Clone)]
struct SimulateArgs {
    #[arg(long, value_enum)]
    algo: AlgoArg,

    #[arg(long, value_enum, default_value = "both")]
    model: ModelArg,

    /// BFS source, as a vertex id from the graph file.
    #[arg(long)]
    source: Option<u64>,

    /// PageRank supersteps.
    #[arg(long, default_value_t = DEFAULT_ITERATIONS)]
    iterations: usize,

    #[arg(long, default_value_t = DEFAULT_DAMPING)]
    damping: f64,

    #[arg(long, default_value_t = 100_000)]
    max_supersteps: usize,
}

#[derive(Args, Clone)]
struct ValidateArgs {
    /// Largest graph for which the spectral cut bound is computed.
    #[arg(long, default_value_t = 500)]
    max_dense_n: usize,

    /// Relabelings averaged for the hash-partition cut estimate.
    #[arg(long, default_value_t = 30)]
    hash_seeds: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportKind {
    /// Vertex and edge counts, diameter, power-law fit.
    Graph,
    /// Degree CDF.
    Degree,
    /// Meta-graph statistics row.
    Meta,
    /// Per-run totals with the predicted cost.
    Runs,
    /// Predicted vs simulated cost across run directories.
    Correlation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write a graph file from a generator or an edge list.
    Generate {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        out: OutDir,
    },
    /// Partition the graph and write the partition map.
    Partition {
        /// Graph file; defaults to the one in the output directory.
        #[arg(long, value_name = "PATH")]
        graph: Option<PathBuf>,
        #[command(flatten)]
        partition: PartitionArgs,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        out: OutDir,
    },
    /// Build the meta-graph and its statistics.
    Metagraph {
        #[command(flatten)]
        out: OutDir,
    },
    /// Run PageRank or BFS on the simulator.
    Simulate {
        #[command(flatten)]
        simulate: SimulateArgs,
        #[command(flatten)]
        out: OutDir,
    },
    /// Check every analytical bound against the stored artifacts.
    Validate {
        #[command(flatten)]
        validate: ValidateArgs,
        #[command(flatten)]
        out: OutDir,
    },
    /// Emit a plot-ready table.
    Report {
        #[arg(long, value_enum, default_value = "runs")]
        kind: ReportKind,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Run directories for the correlation report; defaults to --out.
        #[arg(long = "runs", value_name = "DIR", num_args = 1..)]
        run_dirs: Vec<PathBuf>,
        #[command(flatten)]
        out: OutDir,
    },
    /// All stages in order.
    Pipeline {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        partition: PartitionArgs,
        #[command(flatten)]
        simulate: SimulateArgs,
        #[command(flatten)]
        validate: ValidateArgs,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        out: OutDir,
    },
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    s.parse().map_err(|e: metasketch::Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build_global()
        {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => match e.downcast_ref::<commands::ValidationFailed>() {
            Some(failed) => {
                eprintln!("{failed}");
                ExitCode::from(1)
            }
            None => {
                eprintln!("error: {e:#}");
                ExitCode::from(2)
            }
        },
    }
}
