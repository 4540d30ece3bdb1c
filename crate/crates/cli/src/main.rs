//! `cex`: compute, check and benchmark contrastive ABox explanations.

mod commands;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_CODES: &str = "\
Exit codes:
  0   success
  1   I/O or other runtime error
  2   not a contrastive problem (fact not an instance, foil an instance,
      goal not entailed, or no foil found)
  3   malformed KB, concept, assertion or explanation JSON
  4   search space exceeds the verification guard rails
  5   inconsistent knowledge base
  6   the explanation given to `verify` is not valid
  64  command-line usage error

Set CE_LOG=debug|info|warn for diagnostics on stderr.";

#[derive(Parser, Debug)]
#[command(name = "cex", version, about = "Contrastive ABox explanations over EL⊥ knowledge bases")]
#[command(after_help = EXIT_CODES)]
pub struct Cli {
    /// Output format; each subcommand accepts a subset.
    #[arg(long, global = true, value_enum)]
    pub output: Option<Format>,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute a difference-minimal explanation for why FACT and not FOIL is an instance of CONCEPT.
    Explain(ExplainArgs),
    /// Check an explanation and decide one preference criterion within bounds.
    Verify(VerifyArgs),
    /// Print the ABox extended with every entailed concept assertion.
    Materialize(KbArgs),
    /// Compute one or all ABox justifications of a goal, the TBox being fixed.
    Justify(JustifyArgs),
    /// Draw random contrastive problems from a KB.
    GenCp(GenCpArgs),
    /// Run the benchmark over a corpus and write per-CP CSV records.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
pub struct KbArgs {
    #[arg(long)]
    pub kb: PathBuf,
}

#[derive(Args, Debug)]
pub struct ProblemArgs {
    #[arg(long)]
    pub kb: PathBuf,
    /// Concept in KB syntax, e.g. `and(A some(r B))`.
    #[arg(long)]
    pub concept: String,
    #[arg(long)]
    pub fact: String,
    #[arg(long)]
    pub foil: String,
}

#[derive(Args, Debug)]
pub struct ExplainArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Work on the materialized ABox.
    #[arg(long)]
    pub semantic: bool,
    /// Pair individuals from the justifications with the foil's neighbourhood (default).
    #[arg(long, conflicts_with = "full")]
    pub refined: bool,
    /// Pair every individual of the ABox with every other one.
    #[arg(long)]
    pub full: bool,
    /// Fresh foil-side individuals offered in refined mode.
    #[arg(long)]
    pub fresh_budget: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CriterionArg {
    Diff,
    Conflict,
    Commonality,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrderArg {
    Subset,
    Card,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Explanation JSON file.
    #[arg(long)]
    pub ce: PathBuf,
    #[arg(long, value_enum, default_value = "diff")]
    pub criterion: CriterionArg,
    #[arg(long, value_enum, default_value = "subset")]
    pub mode: OrderArg,
    #[arg(long, default_value_t = 2)]
    pub max_fresh: usize,
    #[arg(long, default_value_t = 6)]
    pub max_atoms: usize,
}

#[derive(Args, Debug)]
#[group(id = "goal", required = true, args = ["assertion", "concept", "inconsistent"])]
pub struct JustifyArgs {
    #[arg(long)]
    pub kb: PathBuf,
    /// Goal assertion, `A(a)`, `r(a, b)` or file syntax.
    #[arg(long)]
    pub assertion: Option<String>,
    /// Goal concept; requires --individual.
    #[arg(long, requires = "individual")]
    pub concept: Option<String>,
    #[arg(long)]
    pub individual: Option<String>,
    /// Justify the inconsistency of the KB.
    #[arg(long)]
    pub inconsistent: bool,
    /// Enumerate all justifications instead of one.
    #[arg(long)]
    pub all: bool,
    /// Stop after this many justifications.
    #[arg(long, default_value_t = 1000)]
    pub limit: usize,
}

#[derive(Args, Debug)]
pub struct GenCpArgs {
    #[arg(long)]
    pub kb: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
}

#[derive(Args, Debug)]
#[group(id = "source", required = true, args = ["corpus", "synthetic"])]
pub struct BenchArgs {
    /// Directory of `*.kb` files.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Use this many synthetic KBs drawn from the seed instead of a corpus.
    #[arg(long)]
    pub synthetic: Option<usize>,
    #[arg(long, default_value_t = 5)]
    pub runs: usize,
    #[arg(long, default_value_t = 10)]
    pub cps: usize,
    /// Wall-clock limit per CP, in seconds.
    #[arg(long, default_value_t = 600)]
    pub timeout: u64,
    /// Worker threads.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Remove ABox assertions entailed by the rest of the KB first.
    #[arg(long)]
    pub strip_entailed: bool,
    #[arg(long)]
    pub semantic: bool,
    #[arg(long)]
    pub full: bool,
    /// Write the per-CP records here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the per-KB summary CSV here.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

fn init_logging() {
    let env = env_logger::Env::new().filter_or("CE_LOG", "warn");
    env_logger::Builder::from_env(env).target(env_logger::Target::Stderr).init();
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() { ExitCode::from(64) } else { ExitCode::SUCCESS };
        }
    };
    init_logging();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.code())
        }
    }
}
