//! `jtl`: JSON front end to jtl-core.
//!
//! Exit codes: 0 success, 1 domain or input error, 2 usage error.

mod commands;
mod error;
mod json;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::json;

#[derive(Parser)]
#[command(name = "jtl", version, about = "Exact computations on free Lie algebras of surfaces")]
struct Cli {
    /// Worker threads for data-parallel suites (results do not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Pretty-print the JSON report.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dimension of the degree-k symplectic derivations h_k.
    DimH {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        degree: usize,
    },
    /// Multiplicity of the trivial sl2 representation in H1(h+)_k.
    H1Invariants {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        degree: usize,
    },
    /// Trace of a derivation in the cyclic quotient.
    Trace {
        /// JSON file, `-` for stdin, or inline JSON.
        #[arg(long)]
        derivation: String,
    },
    /// Morita's trace of a derivation in the symmetric algebra.
    Itr {
        #[arg(long)]
        derivation: String,
    },
    /// Ab(ψ) = log(ψ ∘ s(σ(ψ))⁻¹) as a derivation.
    Ab {
        #[arg(long)]
        aut: String,
    },
    /// The degree-k part of log ψ for ψ of filtration degree at least k.
    Tau {
        #[arg(long)]
        aut: String,
        #[arg(long)]
        degree: usize,
    },
    /// Fox-Jacobian matrix of ψ over the quotient cut at degree m.
    Mag {
        #[arg(long)]
        aut: String,
        #[arg(long)]
        ideal: usize,
    },
    /// Noncommutative log-determinant of a matrix over a quotient algebra.
    Ldet {
        #[arg(long)]
        matrix: String,
    },
    /// Determinant of a matrix over the commutative quotient (m = 2).
    Det {
        #[arg(long)]
        matrix: String,
    },
    /// Symplectic expansion of the surface group of genus g through degree N.
    Expansion {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        trunc: usize,
    },
    /// Evaluate I2, I6, I10_1, I10_2 or I10_3 on a tree, tree combination or derivation.
    EvalInvariant {
        #[arg(long)]
        name: String,
        /// `builtin:NAME`, a JSON file, `-` for stdin, or inline JSON.
        #[arg(long)]
        tree: String,
    },
    /// Run a named property suite.
    Check {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::DimH { .. } => "dim-h",
            Command::H1Invariants { .. } => "h1-invariants",
            Command::Trace { .. } => "trace",
            Command::Itr { .. } => "itr",
            Command::Ab { .. } => "ab",
            Command::Tau { .. } => "tau",
            Command::Mag { .. } => "mag",
            Command::Ldet { .. } => "ldet",
            Command::Det { .. } => "det",
            Command::Expansion { .. } => "expansion",
            Command::EvalInvariant { .. } => "eval-invariant",
            Command::Check { .. } => "check",
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot configure {n} threads: {e}");
            return ExitCode::from(1);
        }
    }
    let start = Instant::now();
    let outcome = commands::run(&cli.command);
    let timing_ms = start.elapsed().as_millis() as u64;
    let (inputs, result, failure) = match outcome {
        Ok(out) => (out.inputs, out.result, out.failure),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let report = json!({
        "command": cli.command.name(),
        "inputs": inputs,
        "result": result,
        "timing_ms": timing_ms,
    });
    let text = if cli.pretty { serde_json::to_string_pretty(&report) } else { serde_json::to_string(&report) };
    let mut stdout = std::io::stdout().lock();
    if writeln!(stdout, "{}", text.expect("JSON values serialize")).is_err() {
        return ExitCode::from(1);
    }
    match failure {
        Some(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        None => ExitCode::SUCCESS,
    }
}
