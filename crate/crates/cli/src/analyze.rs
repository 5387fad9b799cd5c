//! Decoding, moment summaries and reference comparisons for `simulate`
//! output.
//!
//! A results file stores a histogram, not the shot sequence. Block sums need
//! an ordering, so the decoded multiset is shuffled with a stream seeded from
//! the run seed; because shots are i.i.d. this yields blocks with the same law
//! as consecutive shots, and the result is reproducible.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use qgb_core::stats::{
    compare_histogram, convolution_power, decode_distribution, decode_histogram,
    distribution_stats, total_variation, Comparison,
};
use qgb_core::{
    binomial_reference, normal_reference, rescale_blocks, summary_stats, DecodedSamples, Histogram,
    OutcomeDistribution, ReferenceDistribution, SummaryStats,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Failure;
use crate::manifest::{InputSpec, RunManifest};
use crate::results::{ExactResults, Results, ShotResults};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReferenceKind {
    Binomial,
    Normal,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Results JSON written by `simulate`.
    pub results: PathBuf,

    /// Outputs summed per block.
    #[arg(long, default_value_t = 8)]
    pub block: usize,

    /// Reference law for decoded values and block sums.
    #[arg(long, value_enum, default_value_t = ReferenceKind::Binomial)]
    pub reference: ReferenceKind,

    /// Per-peg probability of moving right in the reference.
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,

    /// Board depth; inferred from the results when omitted.
    #[arg(long, value_name = "N")]
    pub levels: Option<usize>,

    /// Histogram CSV of decoded values.
    #[arg(long, short, value_name = "FILE")]
    pub out: Option<PathBuf>,

    /// Histogram CSV of block sums [default: <out>.blocks.csv].
    #[arg(long, value_name = "FILE")]
    pub blocks_out: Option<PathBuf>,
}

fn stats_err(e: impl std::fmt::Display) -> Failure {
    Failure::runtime(e.to_string())
}

fn infer_levels(args: &AnalyzeArgs, results: &Results) -> Result<usize, Failure> {
    if let Some(n) = args.levels.or_else(|| results.manifest().input.levels()) {
        return Ok(n);
    }
    let width = results
        .keys()
        .next()
        .map(str::len)
        .ok_or_else(|| Failure::runtime("results contain no outcomes"))?;
    if width >= 4 && width.is_multiple_of(2) {
        Ok((width - 2) / 2)
    } else {
        Err(Failure::usage(format!(
            "cannot infer levels from {width}-bit outcomes; pass --levels"
        )))
    }
}

fn reference(kind: ReferenceKind, trials: usize, p: f64) -> Result<ReferenceDistribution, Failure> {
    let r = match kind {
        ReferenceKind::Binomial => binomial_reference(trials, p),
        ReferenceKind::Normal => normal_reference(trials as f64 * p, trials as f64 * p * (1.0 - p)),
    };
    r.map_err(|e| Failure::usage(e.to_string()))
}

fn push_stats(report: &mut String, label: &str, s: &SummaryStats) {
    let _ = writeln!(
        report,
        "{label}: mean {:.6}  stddev {:.6}  variance {:.6}",
        s.mean, s.std_dev, s.variance
    );
}

fn push_comparison(report: &mut String, label: &str, r: &ReferenceDistribution, c: &Comparison) {
    let _ = writeln!(
        report,
        "{label} vs {}: TV {:.6}  chi-square {:.4} (dof {}, critical {:.4} at alpha 0.001){}",
        describe(r),
        c.total_variation,
        c.chi_square,
        c.degrees_of_freedom,
        c.critical_value,
        if c.exceeds_critical { "  REJECTED" } else { "" }
    );
}

fn describe(r: &ReferenceDistribution) -> String {
    match *r {
        ReferenceDistribution::Binomial { trials, p } => format!("Binomial({trials}, {p})"),
        ReferenceDistribution::Normal { mean, variance } => format!("Normal({mean}, {variance})"),
    }
}

fn write_csv(path: &Path, header: &str, rows: impl Iterator<Item = String>) -> Result<(), Failure> {
    let mut text = format!("{header}\n");
    for row in rows {
        text.push_str(&row);
        text.push('\n');
    }
    std::fs::write(path, text)?;
    Ok(())
}

fn blocks_path(args: &AnalyzeArgs) -> Option<PathBuf> {
    args.blocks_out.clone().or_else(|| {
        args.out.as_ref().map(|out| {
            let mut p = out.clone();
            p.set_extension("blocks.csv");
            p
        })
    })
}

/// Decoded values in a reproducible pseudo-shot order.
fn shot_sequence(bins: &[u64], seed: u64) -> Vec<usize> {
    let mut values: Vec<usize> = bins
        .iter()
        .enumerate()
        .flat_map(|(k, &n)| std::iter::repeat_n(k, n as usize))
        .collect();
    values.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    values
}

fn analyze_shots(args: &AnalyzeArgs, levels: usize, r: &ShotResults) -> Result<String, Failure> {
    let hist = Histogram::from_counts(r.counts.iter().map(|(k, &n)| (k.clone(), n)));
    let (bins, rejected) = decode_histogram(&hist, levels);
    let mut report = String::new();
    let kept: u64 = bins.iter().sum();
    let _ = writeln!(
        report,
        "levels: {levels}  shots: {}  seed: {}",
        r.shots, r.seed
    );
    if !rejected.is_empty() {
        let dropped: u64 = rejected.iter().map(|(_, n)| n).sum();
        let _ = writeln!(
            report,
            "FLAG: {dropped} shots were not one-hot and are excluded:"
        );
        for (bits, n) in &rejected {
            let _ = writeln!(report, "  {bits}  {n}");
        }
    }
    let values = shot_sequence(&bins, r.seed);
    let stats = summary_stats(values.iter().map(|&v| v as f64)).map_err(stats_err)?;
    push_stats(&mut report, "decoded", &stats);
    let raw_ref = reference(args.reference, levels, args.p)?;
    let raw_cmp =
        compare_histogram(&bins, &raw_ref.bin_probabilities(levels)).map_err(stats_err)?;
    push_comparison(&mut report, "decoded", &raw_ref, &raw_cmp);

    let samples = DecodedSamples::new(values, levels).map_err(stats_err)?;
    let sums = rescale_blocks(&samples, args.block).map_err(stats_err)?;
    let max = args.block * levels;
    let mut block_bins = vec![0u64; max + 1];
    for &s in &sums {
        block_bins[s] += 1;
    }
    if sums.is_empty() {
        let _ = writeln!(
            report,
            "blocks of {}: none ({kept} decoded shots)",
            args.block
        );
    } else {
        let block_stats = summary_stats(sums.iter().map(|&s| s as f64)).map_err(stats_err)?;
        push_stats(
            &mut report,
            &format!("blocks of {} ({})", args.block, sums.len()),
            &block_stats,
        );
        let block_ref = reference(args.reference, max, args.p)?;
        let block_cmp =
            compare_histogram(&block_bins, &block_ref.bin_probabilities(max)).map_err(stats_err)?;
        push_comparison(&mut report, "blocks", &block_ref, &block_cmp);
    }

    if let Some(out) = &args.out {
        let rows = bins.iter().enumerate().map(|(k, n)| format!("{k},{n}"));
        write_csv(out, "value,count", rows)?;
    }
    if let Some(path) = blocks_path(args) {
        let rows = block_bins
            .iter()
            .enumerate()
            .map(|(k, n)| format!("{k},{n}"));
        write_csv(&path, "value,count", rows)?;
    }
    Ok(report)
}

fn analyze_exact(args: &AnalyzeArgs, levels: usize, r: &ExactResults) -> Result<String, Failure> {
    let dist =
        OutcomeDistribution::from_entries(r.probabilities.iter().map(|(k, &p)| (k.clone(), p)));
    let (pmf, rejected) = decode_distribution(&dist, levels);
    let mut report = String::new();
    let _ = writeln!(report, "levels: {levels}  exact");
    if rejected > 1e-12 {
        let _ = writeln!(
            report,
            "FLAG: probability {rejected:.3e} on non-one-hot outcomes is excluded"
        );
    }
    let stats = distribution_stats(&pmf).map_err(stats_err)?;
    push_stats(&mut report, "decoded", &stats);
    let raw_ref = reference(args.reference, levels, args.p)?;
    let _ = writeln!(
        report,
        "decoded vs {}: TV {:.3e}",
        describe(&raw_ref),
        total_variation(&pmf, &raw_ref.bin_probabilities(levels))
    );

    let max = args.block * levels;
    let total: f64 = pmf.iter().sum();
    let normalized: Vec<f64> = pmf.iter().map(|p| p / total).collect();
    let block_pmf = convolution_power(&normalized, args.block);
    let block_stats = distribution_stats(&block_pmf).map_err(stats_err)?;
    push_stats(
        &mut report,
        &format!("blocks of {}", args.block),
        &block_stats,
    );
    let block_ref = reference(args.reference, max, args.p)?;
    let _ = writeln!(
        report,
        "blocks vs {}: TV {:.3e}",
        describe(&block_ref),
        total_variation(&block_pmf, &block_ref.bin_probabilities(max))
    );

    if let Some(out) = &args.out {
        let rows = pmf.iter().enumerate().map(|(k, p)| format!("{k},{p}"));
        write_csv(out, "value,probability", rows)?;
    }
    if let Some(path) = blocks_path(args) {
        let rows = block_pmf
            .iter()
            .enumerate()
            .map(|(k, p)| format!("{k},{p}"));
        write_csv(&path, "value,probability", rows)?;
    }
    Ok(report)
}

pub fn run(args: &AnalyzeArgs) -> Result<(), Failure> {
    if args.block == 0 {
        return Err(Failure::usage("--block must be at least 1"));
    }
    let text = std::fs::read_to_string(&args.results)
        .map_err(|e| Failure::runtime(format!("cannot read {}: {e}", args.results.display())))?;
    let results: Results = serde_json::from_str(&text)
        .map_err(|e| Failure::parse(format!("{}: {e}", args.results.display())))?;
    let levels = infer_levels(args, &results)?;
    let report = match &results {
        Results::Shots(r) => analyze_shots(args, levels, r)?,
        Results::Exact(r) => analyze_exact(args, levels, r)?,
    };
    print!("{report}");

    if let Some(out) = &args.out {
        let mut manifest = RunManifest::new("analyze", InputSpec::file(&args.results, &text));
        manifest.outputs.push(out.clone());
        manifest.outputs.extend(blocks_path(args));
        manifest.write_beside(out)?;
    }
    Ok(())
}
