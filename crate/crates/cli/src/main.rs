use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use wreathvar::DEFAULT_BUDGET;
use wreathvar_cli::{run, Command, CriterionKind, Format, NormalSpec, Options};

/// Finite group computations for varieties generated by wreath products.
#[derive(Parser, Debug)]
#[command(name = "wv", version)]
struct Cli {
    /// Cap on elements materialized by any single computation.
    #[arg(long, global = true, env = "WV_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Seed for randomized witness searches and sampled verification.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum NormalArg {
    Base,
    Center,
    Derived,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CriterionArg {
    /// Two abelian descriptors.
    Pair,
    /// Two finite abelian descriptors (coprime exponents).
    Finite,
    /// Two sets of descriptors.
    Sets,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Order, exponent, nilpotency and derived series of a group.
    Info { expr: String },
    /// Check whether a law holds in a group.
    Law { word: String, expr: String },
    /// Certify that the second group is not in the variety of the first.
    Separate {
        holds_in: String,
        fails_in: String,
        word: String,
    },
    /// Build the relatively free group of rank d in var(G).
    Free { expr: String, d: usize },
    /// Decide H ∈ var(G).
    Member { h: String, g: String },
    /// Embed an extension into the wreath product of a normal subgroup by its quotient.
    Kk {
        expr: String,
        #[arg(long, value_enum)]
        normal: NormalArg,
    },
    /// Decide var(A Wr B) = var(A)var(B) from abelian descriptors.
    Criterion {
        #[arg(value_enum)]
        kind: CriterionArg,
        left: String,
        right: String,
    },
    /// Necessary condition for var(A Wr B) = var(A)var(B) on concrete groups.
    Shmelkin { a: String, b: String },
    /// Schreier rank (n-1)n^c + 1.
    Schreier { n: u64, c: u32 },
    /// Find one assignment making every word nontrivial; words are comma separated.
    Discriminate { expr: String, words: String },
    /// Run every published example as a checked item.
    VerifyPaper {
        /// Do not fail the run because of items skipped for budget.
        #[arg(long)]
        allow_skip: bool,
    },
}

fn command(cmd: Cmd) -> Command {
    match cmd {
        Cmd::Info { expr } => Command::Info { expr },
        Cmd::Law { word, expr } => Command::Law { word, expr },
        Cmd::Separate {
            holds_in,
            fails_in,
            word,
        } => Command::Separate {
            holds: holds_in,
            fails: fails_in,
            word,
        },
        Cmd::Free { expr, d } => Command::Free { expr, rank: d },
        Cmd::Member { h, g } => Command::Member { h, g },
        Cmd::Kk { expr, normal } => Command::Kk {
            expr,
            normal: match normal {
                NormalArg::Base => NormalSpec::Base,
                NormalArg::Center => NormalSpec::Center,
                NormalArg::Derived => NormalSpec::Derived,
            },
        },
        Cmd::Criterion { kind, left, right } => Command::Criterion {
            kind: match kind {
                CriterionArg::Pair => CriterionKind::Pair,
                CriterionArg::Finite => CriterionKind::Finite,
                CriterionArg::Sets => CriterionKind::Sets,
            },
            left,
            right,
        },
        Cmd::Shmelkin { a, b } => Command::Shmelkin { a, b },
        Cmd::Schreier { n, c } => Command::Schreier { n, c },
        Cmd::Discriminate { expr, words } => Command::Discriminate { expr, words },
        Cmd::VerifyPaper { allow_skip } => Command::VerifyPaper { allow_skip },
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Help and version requests are not input errors.
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let format = match cli.format {
        FormatArg::Text => Format::Text,
        FormatArg::Json => Format::Json,
    };
    let opts = Options {
        budget: cli.budget,
        seed: cli.seed,
    };
    match run(&command(cli.command), argv, opts) {
        Ok(outcome) => {
            print!("{}", outcome.report.render(format));
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
