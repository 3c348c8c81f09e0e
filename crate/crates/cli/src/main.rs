use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lefschetz_cli::{
    cmd_apply, cmd_invariants, cmd_search, cmd_verify, emit, load_certificate, load_fibration,
    repl, suite, usage, BuildParams, CliError,
};
use lefschetz_core::{builtin_certificate, certificate_to_json, fibration_to_json, BuiltinParams, Mode, SearchBudget};

#[derive(Parser)]
#[command(name = "lefschetz", version, about = "Move calculus and invariants for abstract Lefschetz fibrations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Weinstein,
    Smooth,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Weinstein => Mode::Weinstein,
            ModeArg::Smooth => Mode::Smooth,
        }
    }
}

#[derive(clap::Args)]
struct Budget {
    /// Total search depth in moves.
    #[arg(long, default_value_t = 8)]
    depth: usize,
    /// Maximum number of stored states.
    #[arg(long, default_value_t = 50_000)]
    states: usize,
    /// Extra fiber vertices stabilization may add.
    #[arg(long, default_value_t = 1)]
    stabilize: usize,
}

impl Budget {
    fn get(&self) -> SearchBudget {
        SearchBudget::new(self.depth, self.states, self.stabilize)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write a catalog fibration: X, Y (--k), Z (--i), Q, A (--m), P_Tmj (--m, --j).
    Build {
        name: String,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        j: Option<usize>,
        /// Comma-separated block parameters for Z.
        #[arg(long, value_delimiter = ',')]
        i: Vec<usize>,
        #[arg(long, default_value_t = 2)]
        n: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report homology, Euler characteristic, component count and index gaps.
    Invariants {
        /// Fibration document or expression such as `X(1)`.
        fibration: String,
        #[arg(long, default_value_t = 2)]
        n: u32,
        #[command(flatten)]
        budget: Budget,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply one move, e.g. `hurwitz:3:right` or `smooth:4:1:2`.
    Apply {
        fibration: String,
        #[arg(name = "MOVE")]
        spec: String,
        #[arg(long, value_enum, default_value = "weinstein")]
        mode: ModeArg,
        #[arg(long, default_value_t = 2)]
        n: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a certificate between two fibrations.
    Search {
        from: String,
        to: String,
        #[arg(long, value_enum, default_value = "weinstein")]
        mode: ModeArg,
        #[arg(long, default_value_t = 2)]
        n: u32,
        #[command(flatten)]
        budget: Budget,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay a certificate document.
    Verify { certificate: String },
    /// Emit a builtin certificate: x-to-a-milnor, x-y-smooth, z-split,
    /// z-family, p-tree-shift, p-tree-reduction.
    Builtin {
        name: String,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        j: Option<usize>,
        #[arg(long)]
        a: Option<usize>,
        #[arg(long)]
        b: Option<usize>,
        /// Comma-separated parameters (z-split prefix, z-family entries).
        #[arg(long, value_delimiter = ',')]
        i: Vec<usize>,
        /// Which link of a z-family chain (1-based).
        #[arg(long)]
        link: Option<usize>,
        #[arg(long, default_value_t = 2)]
        n: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every builtin certificate and invariant separation; one row each.
    PaperSuite,
    /// Interactive session on standard input.
    Repl,
}

fn run(cli: Cli) -> Result<Option<String>, CliError> {
    match cli.command {
        Command::Build { name, k, m, j, i, n, out } => {
            let f = lefschetz_cli::build_named(&name, &BuildParams { k, m, j, i }, n)?;
            emit(fibration_to_json(&f), out.as_deref())
        }
        Command::Invariants { fibration, n, budget, out } => {
            let f = load_fibration(&fibration, n)?;
            emit(cmd_invariants(&f, &budget.get()), out.as_deref())
        }
        Command::Apply { fibration, spec, mode, n, out } => {
            let f = load_fibration(&fibration, n)?;
            emit(cmd_apply(&f, &spec, mode.into())?, out.as_deref())
        }
        Command::Search { from, to, mode, n, budget, out } => {
            let f1 = load_fibration(&from, n)?;
            let f2 = load_fibration(&to, n)?;
            emit(cmd_search(&f1, &f2, mode.into(), &budget.get())?, out.as_deref())
        }
        Command::Verify { certificate } => cmd_verify(&load_certificate(&certificate)?).map(Some),
        Command::Builtin { name, k, m, j, a, b, i, link, n, out } => {
            let params = BuiltinParams { k, m, j, a, b, i, link };
            let c = builtin_certificate(&name, &params, n).map_err(|e| usage(e.to_string()))?;
            emit(certificate_to_json(&c), out.as_deref())
        }
        Command::PaperSuite => {
            let rows = suite::run_suite();
            let text = suite::render(&rows);
            if rows.iter().all(|r| r.passed()) {
                Ok(Some(text))
            } else {
                print!("{text}");
                Err(CliError::Negative("some rows failed".into()))
            }
        }
        Command::Repl => {
            let stdin = io::stdin();
            repl::run(stdin.lock(), io::stdout()).map_err(|e| usage(e.to_string()))?;
            Ok(None)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Some(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
