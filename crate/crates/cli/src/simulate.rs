use std::path::PathBuf;

use clap::Args;
use qgb_core::exact_distribution;
use qgb_core::sim::run_shots_with_workers;

use crate::error::Failure;
use crate::input::{resolve, BoardArgs};
use crate::manifest::RunManifest;
use crate::results::{to_json, ExactResults, ShotResults};

/// Environment variable capping the number of simulation threads.
pub const WORKERS_ENV: &str = "QGB_WORKERS";

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// OpenQASM 2.0 program to run instead of a generated board.
    pub input: Option<PathBuf>,

    #[command(flatten)]
    pub board: BoardArgs,

    /// Number of shots to sample.
    #[arg(long, default_value_t = 1024, conflicts_with = "exact")]
    pub shots: u64,

    /// Seed for the per-shot random streams.
    #[arg(long, default_value_t = 0, conflicts_with = "exact")]
    pub seed: u64,

    /// Enumerate measurement branches and report exact probabilities.
    #[arg(long)]
    pub exact: bool,

    /// Worker threads (default: all cores, capped by QGB_WORKERS).
    #[arg(long, value_name = "N")]
    pub workers: Option<usize>,

    /// Results file; stdout when omitted.
    #[arg(long, short, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

/// Requested workers, defaulting to the core count, capped by the
/// environment.
pub fn worker_count(requested: Option<usize>) -> Result<usize, Failure> {
    let mut workers =
        requested.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if let Ok(cap) = std::env::var(WORKERS_ENV) {
        let cap: usize = cap.trim().parse().map_err(|_| {
            Failure::usage(format!(
                "{WORKERS_ENV} must be a positive integer, got `{cap}`"
            ))
        })?;
        workers = workers.min(cap);
    }
    if workers == 0 {
        return Err(Failure::usage("worker count must be at least 1"));
    }
    Ok(workers)
}

pub fn run(args: &SimulateArgs) -> Result<(), Failure> {
    let resolved = resolve(args.input.as_ref(), &args.board)?;
    let mut manifest = RunManifest::new("simulate", resolved.spec);
    manifest.outputs.extend(args.out.clone());

    let text = if args.exact {
        manifest.exact = true;
        let dist = exact_distribution(&resolved.circuit)?;
        to_json(&ExactResults {
            probabilities: dist.iter().map(|(k, p)| (k.to_owned(), p)).collect(),
            manifest,
        })
    } else {
        if args.shots == 0 {
            return Err(Failure::usage("--shots must be at least 1"));
        }
        let workers = worker_count(args.workers)?;
        manifest.shots = Some(args.shots);
        manifest.seed = Some(args.seed);
        let hist = run_shots_with_workers(&resolved.circuit, args.shots, args.seed, workers)?;
        to_json(&ShotResults {
            counts: hist.iter().map(|(k, n)| (k.to_owned(), n)).collect(),
            shots: hist.shots(),
            seed: args.seed,
            manifest,
        })
    }
    .map_err(|e| Failure::runtime(e.to_string()))?;

    match &args.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}
