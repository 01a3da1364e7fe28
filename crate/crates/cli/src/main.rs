use std::path::PathBuf;
use std::process::ExitCode;

use bellks_cli::commands::{self, CliError};
use bellks_cli::Report;
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Verification commands for CHSH, local hidden variable, Kochen-Specker and
/// propositional checks.
#[derive(Debug, Parser)]
#[command(name = "bellks", version)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,

    /// Include the numeric tolerances used by the checks.
    #[arg(long, global = true)]
    tolerance_report: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Quantum CHSH value of the reference state with Pauli x/y settings.
    ChshQuantum,
    /// Local bound by enumeration of deterministic strategies.
    ChshLhv,
    /// Mermin-Peres square: quantum constraints and coloring search.
    KsSquare,
    /// Commutator observable F(A, B) for Pauli products like `x`, `x.y`.
    Commutator { a: String, b: String },
    /// Consistency of the Bell theorem and Proposition C truth values.
    LogicCases {
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
        bt: u8,
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
        c: u8,
    },
    /// Evaluate a user-supplied local hidden variable model (JSON).
    LhvEval { model: PathBuf },
    /// Largest eigenvalue of the Bell operator against the state value.
    Tsirelson,
    /// Joint unsatisfiability of the five premises of the norm-product argument.
    NormContradiction,
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    Ok(match &cli.command {
        Command::ChshQuantum => commands::chsh_quantum(),
        Command::ChshLhv => commands::chsh_lhv(),
        Command::KsSquare => commands::ks_square(),
        Command::Commutator { a, b } => commands::commutator(a, b)?,
        Command::LogicCases { bt, c } => commands::logic_cases(*bt, *c)?,
        Command::LhvEval { model } => commands::lhv_eval(model)?,
        Command::Tsirelson => commands::tsirelson(),
        Command::NormContradiction => commands::norm_contradiction(),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(mut report) => {
            if cli.tolerance_report {
                commands::add_tolerances(&mut report);
            }
            match cli.format {
                Format::Json => println!("{}", report.to_json()),
                Format::Text => print!("{}", report.to_text()),
            }
            ExitCode::from(report.status.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
