//! `bindlog`: parse, check, normalize, translate and evaluate binding logic.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "bindlog", version, about = "Binding logic kernel")]
struct Cli {
    /// Signature file (`.sig`). Without one only `=` is declared.
    #[arg(long, short, global = true)]
    sig: Option<PathBuf>,
    /// Print a JSON summary instead of the text report.
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, global = true, env = "BINDLOG_SEED", default_value_t = 0)]
    seed: u64,
    /// Rewrite step budget for normalization and congruence checks.
    #[arg(long, global = true, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    /// Random samples per check when exhaustion is impossible.
    #[arg(long, global = true, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and pretty-print; checks well-formedness and sorts.
    Parse {
        /// File path or inline text.
        input: String,
        #[arg(long, value_enum, default_value_t = Kind::Prop)]
        kind: Kind,
    },
    /// Check a proof file.
    CheckProof {
        proof: PathBuf,
        /// Formulas are binding-logic propositions or L′ propositions.
        #[arg(long, value_enum, default_value_t = SyntaxKind::Binding)]
        syntax: SyntaxKind,
        /// Check modulo σ together with the rules of this `.rw` file.
        #[arg(long)]
        modulo: Option<PathBuf>,
        /// Check modulo σ alone.
        #[arg(long, conflicts_with = "modulo")]
        modulo_sigma: bool,
    },
    /// Normalize an L′ term or proposition.
    Normalize {
        input: String,
        /// `sigma`, or a `.rw` file whose rules are added to σ.
        #[arg(long, default_value = "sigma")]
        system: String,
        #[arg(long)]
        prop: bool,
        #[arg(long)]
        outermost: bool,
    },
    /// Translate a binding-logic proposition (or term) into L′.
    Precook {
        input: String,
        #[arg(long)]
        term: bool,
        /// The unnormalized form with explicit shift compositions.
        #[arg(long)]
        literal: bool,
    },
    /// Translate a binding-logic proof into a proof modulo σ.
    TranslateProof {
        proof: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Evaluate a proposition or term in a model.
    Eval {
        /// `ext`, `delta`, `delta-literal`, `fullfn:<size>` or a `.mdl` file.
        #[arg(long)]
        model: String,
        #[arg(long, conflicts_with = "term", required_unless_present = "term")]
        prop: Option<String>,
        #[arg(long)]
        term: Option<String>,
        /// Values of free variables, as `x=k`.
        #[arg(long = "assign", value_parser = parse_assignment)]
        assign: Vec<(String, String)>,
    },
    /// Check the IFS laws and coherence of a model.
    VerifyModel {
        #[arg(long)]
        model: String,
        /// Largest levels `n,p,q`.
        #[arg(long, default_value = "2,2,2", value_parser = parse_bounds)]
        bounds: (usize, usize, usize),
        /// Sample instead of enumerating, even for finite models.
        #[arg(long)]
        sampled: bool,
        /// Also test the σ rules in the induced L′ model.
        #[arg(long)]
        sigma: bool,
        /// Write the model's tables up to the largest bound to this `.mdl` file.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Recompute a worked independence result.
    Demo {
        #[arg(value_enum)]
        which: Demo,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Term,
    Prop,
    Sequent,
    Lterm,
    Lprop,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SyntaxKind {
    Binding,
    Lprime,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Demo {
    Extensionality,
    DisjointSum,
}

fn parse_assignment(s: &str) -> Result<(String, String), String> {
    let (x, v) = s.split_once('=').ok_or("expected `name=value`")?;
    Ok((x.trim().to_string(), v.trim().to_string()))
}

fn parse_bounds(s: &str) -> Result<(usize, usize, usize), String> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [n, p, q] => Ok((n, p, q)),
        _ => Err("expected three levels `n,p,q`".into()),
    }
}

/// Failures, split by exit status.
#[derive(Debug)]
pub enum Failure {
    /// Well-formed input that fails the check (exit 1).
    Semantic(String),
    /// Unreadable or malformed input (exit 2).
    Input(String),
}

pub struct RunConfig {
    pub sig: Option<PathBuf>,
    pub json: bool,
    pub seed: u64,
    pub budget: usize,
    pub samples: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = RunConfig {
        sig: cli.sig,
        json: cli.json,
        seed: cli.seed,
        budget: cli.budget as usize,
        samples: cli.samples as usize,
    };
    match commands::run(cli.cmd, &cfg) {
        Ok(report) => {
            print!("{report}");
            ExitCode::SUCCESS
        }
        Err(Failure::Semantic(report)) => {
            print!("{report}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
