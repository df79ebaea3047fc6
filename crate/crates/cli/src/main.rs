//! `kstlist`: exact `K_{s,t}`-minor and list-colouring checks, and the
//! randomized clique-glued counterexample construction.
//!
//! Exit codes: 0 positive outcome, 1 negative outcome, 2 budget or cap
//! refusal, 3 usage error, 4 input, output or precondition error.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kstlist_core::construction::{parse_rational, Rational};

use report::{FileFormat, Format};

pub const EXIT_USAGE: u8 = 3;
pub const EXIT_ERROR: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "kstlist", version, about = "K_{s,t}-minor and list-colouring tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Search for a K_{s,t} minor (exit 0 found, 1 none, 2 budget exhausted).
    CheckMinor(CheckMinor),
    /// Check a branch-set model against a graph (exit 0 valid, 1 invalid).
    VerifyMinor(VerifyMinor),
    /// Search for an L-colouring (exit 0 colourable, 1 not).
    CheckLcolor(CheckLcolor),
    /// Decide k-choosability exactly (exit 0 choosable, 1 not, 2 refused by cap).
    CheckChoosable(CheckChoosable),
    /// Sample the bipartite graph and build the clique gadget (exit 0 built, 1 gave up).
    BuildH(BuildH),
    /// Glue gadget copies and assign adversarial lists (exit 0 no L-colouring, 1 colourable, 2 refused by cap).
    BuildCounterexample(BuildCounterexample),
    /// Evaluate the derived parameters and the log-space probability bounds.
    Bounds(Bounds),
    /// Seeded Monte Carlo sweep of the sampled graph's properties.
    Experiment(Experiment),
}

#[derive(Args, Debug)]
struct GraphInput {
    /// Graph file (`.json` or edge list).
    #[arg(long)]
    graph: PathBuf,
    /// Overrides the format implied by the file extension.
    #[arg(long, value_enum)]
    graph_format: Option<FileFormat>,
}

#[derive(Args, Debug)]
struct Output {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Report file; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Parallel {
    /// Worker threads (0: one per core).
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Make parallel runs return exactly what a sequential run returns.
    #[arg(long)]
    deterministic: bool,
}

#[derive(Args, Debug)]
struct CheckMinor {
    #[command(flatten)]
    input: GraphInput,
    #[arg(long)]
    s: usize,
    #[arg(long)]
    t: usize,
    /// Maximum number of search nodes.
    #[arg(long)]
    budget: Option<u64>,
    /// Also write the model on its own, for `verify-minor`.
    #[arg(long)]
    model_out: Option<PathBuf>,
    #[command(flatten)]
    parallel: Parallel,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct VerifyMinor {
    #[command(flatten)]
    input: GraphInput,
    /// Model JSON: {"side1": [[..]], "side2": [[..]]}.
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    s: usize,
    #[arg(long)]
    t: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct CheckLcolor {
    #[command(flatten)]
    input: GraphInput,
    /// Lists JSON: {"lists": [[..]]}.
    #[arg(long)]
    lists: PathBuf,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct CheckChoosable {
    #[command(flatten)]
    input: GraphInput,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 8)]
    max_vertices: usize,
    #[arg(long, default_value_t = 3)]
    max_k: usize,
    /// Write the witness lists (if any) for `check-lcolor`.
    #[arg(long)]
    witness_out: Option<PathBuf>,
    #[command(flatten)]
    parallel: Parallel,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Sampled,
    Exhaustive,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BlockRule {
    Required,
    RecordOnly,
}

#[derive(Args, Debug)]
struct Sampling {
    #[arg(long, value_parser = rational, default_value = "1/2")]
    eps: Rational,
    #[arg(long = "C", value_parser = rational, default_value = "1")]
    c_const: Rational,
    /// Overrides δ = ε²/(4C²).
    #[arg(long, value_parser = rational)]
    delta: Option<Rational>,
    #[arg(long)]
    seed: u64,
    /// Block-property check.
    #[arg(long, value_enum, default_value = "sampled")]
    mode: Mode,
    /// Random collections per block check in sampled mode.
    #[arg(long)]
    block_trials: Option<u64>,
    /// Set choices allowed in exhaustive mode.
    #[arg(long, default_value_t = 10_000_000)]
    node_cap: u64,
}

#[derive(Args, Debug)]
struct BuildH {
    #[arg(long)]
    n: usize,
    /// Size of side A (default n).
    #[arg(long)]
    m: Option<usize>,
    #[command(flatten)]
    sampling: Sampling,
    #[arg(long, default_value_t = 32)]
    retries: u32,
    #[arg(long, value_enum, default_value = "required")]
    block: BlockRule,
    /// Write the gadget graph.
    #[arg(long)]
    graph_out: Option<PathBuf>,
    #[command(flatten)]
    parallel: Parallel,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct BuildCounterexample {
    /// Gadget graph with sides A and B labelled.
    #[arg(long)]
    h: PathBuf,
    #[arg(long, value_enum)]
    graph_format: Option<FileFormat>,
    /// Palette size (default |A| + |B| - 1).
    #[arg(long)]
    palette: Option<usize>,
    /// JSON list of colourings of B; all colourings if absent.
    #[arg(long)]
    colorings: Option<PathBuf>,
    /// Maximum number of vertices in the glued graph.
    #[arg(long, default_value_t = kstlist_core::construction::DEFAULT_VERTEX_CAP)]
    cap: usize,
    #[arg(long)]
    graph_out: Option<PathBuf>,
    #[arg(long)]
    lists_out: Option<PathBuf>,
    /// Skip the L-colouring search on the glued graph.
    #[arg(long)]
    no_verify: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct Bounds {
    #[arg(long, value_parser = rational)]
    eps: Rational,
    #[arg(long = "C", value_parser = rational)]
    c_const: Rational,
    #[arg(long)]
    n: u64,
    #[arg(long, value_parser = rational)]
    delta: Option<Rational>,
    /// With --t, also evaluate the list-chromatic bound for K_{s,t}.
    #[arg(long, requires = "t")]
    s: Option<u64>,
    #[arg(long, requires = "s")]
    t: Option<u64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct Experiment {
    /// Comma-separated sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    /// Samples per size.
    #[arg(long)]
    trials: u64,
    #[command(flatten)]
    sampling: Sampling,
    #[command(flatten)]
    parallel: Parallel,
    #[command(flatten)]
    output: Output,
}

fn rational(text: &str) -> Result<Rational, String> {
    parse_rational(text).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
