//! `fldkit` command-line front end.
//!
//! Every command prints one JSON report on stdout and a short human summary
//! on stderr. Exit codes: 0 ok/true, 1 false or failed verification,
//! 2 parse error, 3 semantic error, 4 budget exceeded.

mod commands;
mod error;
mod report;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::report::{Inputs, Report};

#[derive(Parser, Debug)]
#[command(name = "fldkit", version, about = "Finite posets: formulas, lexicographic decompositions, EF games, closures")]
struct Cli {
    /// Add `wall_time_ms` to the report. Off by default so reports are
    /// byte-for-byte reproducible.
    #[arg(long, global = true)]
    timing: bool,

    /// Emit the JSON report on stdout. This is the default and only format.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a formula on a poset.
    Eval(EvalArgs),
    /// Enumerate FLD decompositions, optionally with witness formulas and transfer.
    Decompose(DecomposeArgs),
    /// Run a verification suite, or `all` of them.
    Verify(VerifyArgs),
    /// Decide an EF game and print a winning-strategy trace.
    Ef(EfArgs),
    /// Report class predicates and decomposition counts.
    Classify(PosetArg),
    /// Compute a bounded closure of a base class.
    Closure(ClosureArgs),
    /// Print the canonical form of a poset.
    Canon(PosetArg),
    /// Relativize a formula to a definable subset.
    Relativize(RelativizeArgs),
}

#[derive(Args, Debug)]
pub struct PosetArg {
    /// Poset JSON file: {"elements": [...], "le": [[a, b], ...]}.
    #[arg(long)]
    pub poset: String,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[arg(long)]
    pub poset: String,
    /// Formula text, or @FILE.
    #[arg(long)]
    pub formula: String,
    /// Variable assignment `var=element`; repeatable or comma separated.
    #[arg(long = "assign", value_delimiter = ',')]
    pub assign: Vec<String>,
    /// Exit 0 when the formula holds and 1 when it does not.
    #[arg(long)]
    pub check: bool,
}

#[derive(Args, Debug)]
pub struct DecomposeArgs {
    #[arg(long)]
    pub poset: String,
    #[arg(long, default_value = "fld1")]
    pub mode: String,
    /// Include the witness formulas of every listed decomposition.
    #[arg(long)]
    pub emit_formulas: bool,
    /// Target poset file: search it for a tuple satisfying each decomposition's witness formula.
    #[arg(long)]
    pub transfer: Option<String>,
    /// Restrict to the decomposition at this position of the listing.
    #[arg(long)]
    pub pick: Option<usize>,
    /// Block sentence, one per index element in block order; needs --pick.
    #[arg(long = "sentence", requires = "pick")]
    pub sentences: Vec<String>,
    /// Largest poset whose partitions are enumerated.
    #[arg(long, default_value_t = fldkit::fld::DEFAULT_PARTITION_BUDGET)]
    pub partition_budget: usize,
    /// Largest number of parameter tuples searched during transfer.
    #[arg(long, default_value_t = fldkit::fld::DEFAULT_TUPLE_BUDGET)]
    pub tuple_budget: usize,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Suite name, or `all`.
    pub suite: String,
    /// Size bound; defaults to the suite's own default.
    #[arg(long)]
    pub bound: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest game length for the EF-based suites.
    #[arg(long, default_value_t = 3)]
    pub k: usize,
}

#[derive(Args, Debug)]
pub struct EfArgs {
    #[arg(long)]
    pub left: String,
    #[arg(long)]
    pub right: String,
    #[arg(long)]
    pub k: usize,
    /// Pinned elements of the left poset, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub left_pins: Vec<String>,
    /// Pinned elements of the right poset, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub right_pins: Vec<String>,
    #[arg(long, default_value_t = fldkit::ef::DEFAULT_MAX_ROUNDS)]
    pub max_rounds: usize,
    #[arg(long, default_value_t = fldkit::ef::DEFAULT_MAX_SIZE)]
    pub max_size: usize,
    /// Exit 0 when player II wins and 1 otherwise.
    #[arg(long)]
    pub check: bool,
}

#[derive(Args, Debug)]
pub struct ClosureArgs {
    /// Base class: predicates joined by `&`, or `seeds:FILE`.
    #[arg(long)]
    pub base: String,
    /// sigma, sigma-rooted or union-product.
    #[arg(long, default_value = "sigma")]
    pub op: String,
    #[arg(long)]
    pub bound: usize,
    /// Largest bound accepted; defaults depend on the operator.
    #[arg(long)]
    pub budget: Option<usize>,
    /// Poset file to test for membership, with a construction when found.
    #[arg(long)]
    pub member: Option<String>,
}

#[derive(Args, Debug)]
pub struct RelativizeArgs {
    /// Formula to relativize, or @FILE.
    #[arg(long)]
    pub formula: String,
    /// Relativizer phi(params, subject), or @FILE.
    #[arg(long)]
    pub relativizer: String,
    /// Parameters of the relativizer, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub params: Vec<String>,
    #[arg(long, default_value = "v")]
    pub subject: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command: Vec<String> = std::env::args().skip(1).collect();
    let start = Instant::now();
    let mut inputs = Inputs::default();
    let outcome = match &cli.command {
        Command::Eval(a) => commands::eval(a, &mut inputs),
        Command::Decompose(a) => commands::decompose(a, &mut inputs),
        Command::Verify(a) => commands::verify(a),
        Command::Ef(a) => commands::ef(a, &mut inputs),
        Command::Classify(a) => commands::classify(a, &mut inputs),
        Command::Closure(a) => commands::closure(a, &mut inputs),
        Command::Canon(a) => commands::canon(a, &mut inputs),
        Command::Relativize(a) => commands::relativize(a, &mut inputs),
    };
    let wall = cli.timing.then(|| start.elapsed());
    let report = Report::new(command, &inputs, outcome, wall);
    report.emit()
}
