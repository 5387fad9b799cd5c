//! `qgb`: build, simulate, analyse and count quantum Galton board circuits.
//!
//! Exit status: 0 success, 1 usage, 2 parse error, 3 runtime error.

mod analyze;
mod count;
mod error;
mod input;
mod manifest;
mod results;
mod simulate;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qgb_core::qasm;

use crate::error::Failure;
use crate::input::{resolve_board, BoardArgs};
use crate::manifest::RunManifest;

#[derive(Debug, Parser)]
#[command(name = "qgb", version, about = "Quantum Galton board circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the OpenQASM 2.0 program for a board or peg.
    Build(BuildArgs),
    /// Sample shots, or enumerate exact probabilities, as JSON.
    Simulate(simulate::SimulateArgs),
    /// Decode results, summarise them and compare with a reference law.
    Analyze(analyze::AnalyzeArgs),
    /// Gate counts, depth and closed-form budgets.
    Count(count::CountArgs),
}

#[derive(Debug, Args)]
struct BuildArgs {
    #[command(flatten)]
    board: BoardArgs,

    /// Output file; stdout when omitted. A manifest is written beside it.
    #[arg(long, short, value_name = "FILE")]
    out: Option<PathBuf>,
}

fn build(args: &BuildArgs) -> Result<(), Failure> {
    let resolved = resolve_board(&args.board)?;
    let text = qasm::emit(&resolved.circuit);
    match &args.out {
        Some(path) => {
            std::fs::write(path, &text)?;
            let mut manifest = RunManifest::new("build", resolved.spec);
            manifest.outputs.push(path.clone());
            manifest.write_beside(path)?;
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(Failure::USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let outcome = match &cli.command {
        Command::Build(args) => build(args),
        Command::Simulate(args) => simulate::run(args),
        Command::Analyze(args) => analyze::run(args),
        Command::Count(args) => count::run(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {failure}");
            failure.exit_code()
        }
    }
}
