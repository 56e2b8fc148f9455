mod commands;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use commands::{CommandReport, Status};

#[derive(Debug, Parser)]
#[command(name = "statesep", version, about = "Decision problems as quantum state discrimination")]
pub struct Cli {
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,

    /// Tolerance for property verification and state comparisons.
    #[arg(long, default_value_t = statesep::DEFAULT_TOLERANCE, global = true)]
    pub tol: f64,

    /// Seed for Born sampling and randomized checks.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a filter system, optionally permute its columns and verify (F1)-(F3).
    Filters {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        /// 1-based one-line notation ("2 1 3 4") or cycles ("(1 2)(3 4)").
        #[arg(long)]
        permutation: Option<String>,
        #[arg(long)]
        verify: bool,
    },
    /// Run Deutsch's algorithm on a one-bit truth table such as "01".
    Deutsch {
        function: String,
        /// Sample the filter measurement this many times.
        #[arg(long)]
        shots: Option<usize>,
    },
    /// Decide one of the problems D1-D4 for the sum function f_ij.
    Gendeutsch {
        #[arg(long)]
        problem: String,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
    },
    /// Classical and pairwise-quantum parity, for one function or all at arity k.
    Parity {
        #[arg(long)]
        k: usize,
        /// Binary or 0x-prefixed hex truth table.
        #[arg(long)]
        function: Option<String>,
    },
    /// Regenerate a reference table and diff it against its transcription.
    Tables { name: String },
    /// Run every module's invariant suite.
    VerifyAll,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let echo = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    match commands::run(&cli, echo) {
        Ok((report, text)) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&report).expect("report serializes")),
                Format::Text => print_text(&report, &text),
            }
            if report.status == Status::Ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn print_text(report: &CommandReport, text: &[String]) {
    for line in text {
        println!("{line}");
    }
    for d in &report.diagnostics {
        println!("note: {d}");
    }
    println!("status: {}", report.status);
}
