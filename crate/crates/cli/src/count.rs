use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use qgb_core::{decompose_cswap, depth, gate_bound, gate_count, BoundVariant, GateKind};

use crate::error::Failure;
use crate::input::{board_levels, infer_variant, resolve, BoardArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Unbiased,
    Biased,
    FineGrained,
}

impl From<VariantArg> for BoundVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Unbiased => BoundVariant::Unbiased,
            VariantArg::Biased => BoundVariant::Biased,
            VariantArg::FineGrained => BoundVariant::FineGrained,
        }
    }
}

#[derive(Debug, Args)]
pub struct CountArgs {
    /// OpenQASM 2.0 program to count instead of a generated board.
    pub input: Option<PathBuf>,

    #[command(flatten)]
    pub board: BoardArgs,

    /// Closed-form budget to compare against; inferred when omitted.
    #[arg(long, value_enum)]
    pub variant: Option<VariantArg>,
}

fn variant_name(v: BoundVariant) -> &'static str {
    match v {
        BoundVariant::Unbiased => "unbiased",
        BoundVariant::Biased => "biased",
        BoundVariant::FineGrained => "fine-grained",
    }
}

pub fn report(args: &CountArgs) -> Result<String, Failure> {
    let resolved = resolve(args.input.as_ref(), &args.board)?;
    let circuit = &resolved.circuit;
    let counts = gate_count(circuit);
    let decomposed_circuit = decompose_cswap(circuit);
    let decomposed = gate_count(&decomposed_circuit);

    let mut out = String::new();
    let _ = writeln!(out, "{:<10}{:>8}{:>12}", "kind", "count", "decomposed");
    for kind in GateKind::ALL {
        let (a, b) = (counts.get(kind), decomposed.get(kind));
        if a + b > 0 {
            let _ = writeln!(out, "{:<10}{a:>8}{b:>12}", kind.to_string());
        }
    }
    let _ = writeln!(
        out,
        "{:<10}{:>8}{:>12}",
        "total",
        counts.total_active(),
        decomposed.total_active()
    );
    let _ = writeln!(
        out,
        "{:<10}{:>8}{:>12}",
        "depth",
        depth(circuit),
        depth(&decomposed_circuit)
    );

    let levels = resolved.spec.levels().or_else(|| board_levels(circuit));
    match levels {
        Some(n) => {
            let variant = args
                .variant
                .map(BoundVariant::from)
                .or(resolved.variant)
                .unwrap_or_else(|| infer_variant(circuit, n));
            let bound = gate_bound(n, variant);
            let _ = writeln!(
                out,
                "bound     {bound:>8}  ({} formula, n = {n})",
                variant_name(variant)
            );
            let total = counts.total_active();
            if total > bound {
                let _ = writeln!(
                    out,
                    "DISCREPANCY: {total} operations exceed the {} bound {bound} by {}",
                    variant_name(variant),
                    total - bound
                );
            } else {
                let _ = writeln!(out, "within bound");
            }
        }
        None => {
            let _ = writeln!(out, "bound     n/a (not a board layout)");
        }
    }
    Ok(out)
}

pub fn run(args: &CountArgs) -> Result<(), Failure> {
    print!("{}", report(args)?);
    Ok(())
}
