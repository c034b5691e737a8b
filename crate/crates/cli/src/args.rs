use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lcs_threshold::bench::{BenchBackend, Structure};
use lcs_threshold::DEFAULT_MEMORY_CAP;

#[derive(Debug, Parser)]
#[command(
    name = "tlcs",
    version,
    about = "Longest common subsequence via threshold sets"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the LCS length of two inputs.
    Length(InputArgs),
    /// Print one longest common subsequence.
    Subseq(InputArgs),
    /// Print sequence lengths, match count, LCS length and per-backend counters.
    Stats(InputArgs),
    /// Run every backend and the reference checks; exit 1 on any disagreement.
    Verify(VerifyArgs),
    /// Run a benchmark suite and print CSV or JSON.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Bytes,
    Lines,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendChoice {
    Veb,
    Tree,
    Array,
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// First input (`-` reads standard input).
    #[arg(value_parser = parse_input)]
    pub first: PathBuf,
    /// Second input.
    #[arg(value_parser = parse_input)]
    pub second: PathBuf,
    /// Treat the two inputs as literal strings instead of paths.
    #[arg(long)]
    pub inline: bool,
    #[arg(long, value_enum, default_value_t = Mode::Bytes)]
    pub mode: Mode,
    #[arg(long, value_enum, default_value_t = BackendChoice::Auto)]
    pub backend: BackendChoice,
    #[arg(long, value_enum, default_value_t = Output::Text)]
    pub output: Output,
    /// Maximum trace entries (and DP cells) a run may allocate.
    #[arg(long, default_value_t = DEFAULT_MEMORY_CAP)]
    pub memory_cap: u64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Run the van Emde Boas checks with the faulty "delete only below the
    /// maximum" update, to confirm verification catches it.
    #[arg(long, hide = true)]
    pub simulate_max_guard_bug: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Sequence length for a single custom case; omit to run the default suite.
    #[arg(long)]
    pub n: Option<usize>,
    /// Length of the first sequence (defaults to --n).
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 4)]
    pub sigma: u32,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = Structure::UniformRandom, value_parser = parse_structure)]
    pub structure: Structure,
    #[arg(long, default_value_t = 3)]
    pub repeats: u32,
    /// Comma-separated backends: veb, tree, array, dp_oracle.
    #[arg(long, value_delimiter = ',', value_parser = parse_bench_backend)]
    pub backend: Vec<BenchBackend>,
    #[arg(long, value_enum, default_value_t = Output::Text)]
    pub output: Output,
    /// Shorthand for --output json.
    #[arg(long)]
    pub json: bool,
    #[arg(long, default_value_t = DEFAULT_MEMORY_CAP)]
    pub memory_cap: u64,
}

// Accepts empty values, which are meaningful with --inline.
fn parse_input(s: &str) -> Result<PathBuf, String> {
    Ok(PathBuf::from(s))
}

fn parse_structure(s: &str) -> Result<Structure, String> {
    s.parse()
}

fn parse_bench_backend(s: &str) -> Result<BenchBackend, String> {
    s.parse()
}
