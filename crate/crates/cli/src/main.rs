//! `loopfo`: model checking, approximants, normal forms, proof checking,
//! translations and searches for first-order logic with self-reference.

mod commands;
mod output;
mod play;
mod suites;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exit codes: 0 success, 1 verdict-dependent signal, 2 usage,
/// 3 input error, 4 budget or cap exceeded, 5 external prover failure.
pub const EXIT_SIGNAL: u8 = 1;
pub const EXIT_INPUT: u8 = 3;
pub const EXIT_BUDGET: u8 = 4;
pub const EXIT_PROVER: u8 = 5;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(msg: impl std::fmt::Display) -> CliError {
        CliError {
            code: EXIT_INPUT,
            message: msg.to_string(),
        }
    }
}

pub type CliResult = Result<u8, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    JsonLines,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Semantics {
    Bounded,
    Unbounded,
}

#[derive(Parser)]
#[command(
    name = "loopfo",
    version,
    about = "Logic engine for first-order logic with self-reference"
)]
struct Cli {
    /// Output format (`json-lines` prints one record per result)
    #[arg(long, global = true, value_enum, default_value = "plain")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FormulaArg {
    /// Formula text
    #[arg(long, conflicts_with = "formula_file")]
    formula: Option<String>,
    /// File containing the formula
    #[arg(long)]
    formula_file: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula on a model under bounded or unbounded semantics
    Check {
        #[arg(long)]
        model: String,
        #[command(flatten)]
        formula: FormulaArg,
        /// Assignment for free variables, e.g. `x=0,y=2`
        #[arg(long, default_value = "")]
        assign: String,
        #[arg(long, value_enum, default_value = "bounded")]
        semantics: Semantics,
        /// Evaluate one n-bounded game instead
        #[arg(long)]
        clock: Option<u32>,
        /// Exit 1 unless the verdict matches
        #[arg(long)]
        expect: Option<String>,
        /// Dump the arena and the winner's strategy
        #[arg(long)]
        explain: bool,
    },
    /// Play the evaluation game interactively
    Play {
        #[arg(long)]
        model: String,
        #[command(flatten)]
        formula: FormulaArg,
        #[arg(long, default_value = "")]
        assign: String,
        /// Side to play: eloise, abelard or spectate
        #[arg(long = "as", default_value = "eloise")]
        side: String,
        #[arg(long)]
        clock: Option<u32>,
    },
    /// Print the n-approximant (pure first-order)
    Approx {
        #[command(flatten)]
        formula: FormulaArg,
        #[arg(long)]
        n: u32,
        /// Optional model to evaluate the approximant on
        #[arg(long)]
        model: Option<String>,
        #[arg(long, default_value = "")]
        assign: String,
    },
    /// Print the n-unfolding
    Unfold {
        #[command(flatten)]
        formula: FormulaArg,
        #[arg(long)]
        n: u32,
    },
    /// Strong (default) or weak negation normal form
    Nnf {
        #[command(flatten)]
        formula: FormulaArg,
        #[arg(long)]
        weak: bool,
        /// Print the rewrite trace as a checkable derivation
        #[arg(long)]
        trace: bool,
    },
    /// Deterministic regularisation
    Regularize {
        #[command(flatten)]
        formula: FormulaArg,
    },
    /// Check a derivation file
    ProveCheck { file: String },
    /// Build a derivation: `nnf` (both directions) or `approximant`
    ProveBuild {
        /// `nnf` or `approximant`
        mode: String,
        #[command(flatten)]
        formula: FormulaArg,
        #[arg(long, default_value_t = 0)]
        n: u32,
        /// Output file (stdout when absent)
        #[arg(short, long)]
        out: Option<String>,
    },
    /// Emit the safety theory or a TPTP unit
    Translate {
        #[command(flatten)]
        formula: FormulaArg,
        #[arg(long, conflicts_with = "tptp")]
        safety: bool,
        #[arg(long)]
        tptp: bool,
        #[arg(long, default_value = "f1")]
        name: String,
        #[arg(long, default_value = "conjecture")]
        role: String,
    },
    /// Search small structures for a bounded-semantics model
    SatSearch {
        #[command(flatten)]
        formula: FormulaArg,
        #[arg(long, default_value_t = 3)]
        max_n: u32,
        #[arg(long, default_value_t = 3)]
        max_domain: usize,
    },
    /// Approximant-based validity search with small-model refutation
    ValidSearch {
        #[command(flatten)]
        formula: FormulaArg,
        #[arg(long, default_value_t = 3)]
        max_n: u32,
        #[arg(long, default_value_t = 3)]
        max_domain: usize,
        /// External prover command (also `LOOPFO_PROVER_CMD`)
        #[arg(long)]
        prover_cmd: Option<String>,
    },
    /// Run a built-in property suite
    EnumerateTest {
        /// Suite: duality, conservativity, monotonicity, regularize, all
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0xC0FFEE)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        count: usize,
    },
}

pub fn node_budget() -> usize {
    std::env::var("LOOPFO_NODE_BUDGET")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(loopfo_core::DEFAULT_NODE_BUDGET)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check {
            model,
            formula,
            assign,
            semantics,
            clock,
            expect,
            explain,
        } => commands::check(
            cli.format, &model, &formula, &assign, semantics, clock, expect, explain,
        ),
        Command::Play {
            model,
            formula,
            assign,
            side,
            clock,
        } => play::run(&model, &formula, &assign, &side, clock),
        Command::Approx {
            formula,
            n,
            model,
            assign,
        } => commands::approx(cli.format, &formula, n, model.as_deref(), &assign),
        Command::Unfold { formula, n } => commands::unfold(cli.format, &formula, n),
        Command::Nnf {
            formula,
            weak,
            trace,
        } => commands::nnf(cli.format, &formula, weak, trace),
        Command::Regularize { formula } => commands::regularize(cli.format, &formula),
        Command::ProveCheck { file } => commands::prove_check(cli.format, &file),
        Command::ProveBuild {
            mode,
            formula,
            n,
            out,
        } => commands::prove_build(&mode, &formula, n, out.as_deref()),
        Command::Translate {
            formula,
            safety,
            tptp,
            name,
            role,
        } => commands::translate(cli.format, &formula, safety, tptp, &name, &role),
        Command::SatSearch {
            formula,
            max_n,
            max_domain,
        } => commands::sat_search(cli.format, &formula, max_n, max_domain),
        Command::ValidSearch {
            formula,
            max_n,
            max_domain,
            prover_cmd,
        } => commands::valid_search(cli.format, &formula, max_n, max_domain, prover_cmd),
        Command::EnumerateTest { suite, seed, count } => {
            suites::run(cli.format, &suite, seed, count)
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
