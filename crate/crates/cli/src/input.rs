//! Turning board flags or a `.qasm` path into a circuit.

use std::path::PathBuf;

use clap::Args;
use qgb_core::builder::{peg_count, uniform_angles};
use qgb_core::qasm;
use qgb_core::{build_biased_peg, build_peg, AngleValue, Bias, BoundVariant, Circuit, QgbSpec};

use crate::error::Failure;
use crate::manifest::InputSpec;

#[derive(Debug, Clone, Args)]
pub struct BoardArgs {
    /// Number of board levels (rows of pegs).
    #[arg(long, value_name = "N")]
    pub levels: Option<usize>,

    /// Bias every peg by RX(θ), e.g. `2pi/3`, `0.5pi`, `pi/2`, `1.2`.
    #[arg(long, value_name = "ANGLE", allow_hyphen_values = true)]
    pub bias_theta: Option<String>,

    /// File with one angle per peg, top row first; `#` starts a comment.
    #[arg(long, value_name = "FILE", conflicts_with = "bias_theta")]
    pub peg_angles: Option<PathBuf>,

    /// Build the per-peg layout even with a single --bias-theta.
    #[arg(long)]
    pub fine_grained: bool,

    /// A single peg instead of a board (--bias-theta applies).
    #[arg(long, conflicts_with_all = ["levels", "peg_angles", "fine_grained"])]
    pub peg: bool,
}

impl BoardArgs {
    pub fn is_empty(&self) -> bool {
        self.levels.is_none()
            && self.bias_theta.is_none()
            && self.peg_angles.is_none()
            && !self.fine_grained
            && !self.peg
    }
}

/// A resolved input, plus what is known about its layout.
pub struct Resolved {
    pub circuit: Circuit,
    pub spec: InputSpec,
    pub variant: Option<BoundVariant>,
}

pub fn parse_angle_flag(text: &str) -> Result<AngleValue, Failure> {
    qasm::parse_angle(text)
        .map_err(|e| Failure::usage(format!("invalid angle `{text}`: {}", e.kind)))
}

fn read_angles(path: &PathBuf) -> Result<Vec<AngleValue>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::runtime(format!("cannot read {}: {e}", path.display())))?;
    let mut angles = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        for item in line.split([',', ' ', '\t']).filter(|s| !s.is_empty()) {
            let angle = qasm::parse_angle(item).map_err(|e| {
                Failure::parse(format!(
                    "{}:{}: invalid angle `{item}`: {}",
                    path.display(),
                    i + 1,
                    e.kind
                ))
            })?;
            angles.push(angle);
        }
    }
    Ok(angles)
}

pub fn resolve_board(args: &BoardArgs) -> Result<Resolved, Failure> {
    let theta = args
        .bias_theta
        .as_deref()
        .map(parse_angle_flag)
        .transpose()?;
    if args.peg {
        let circuit = match theta {
            Some(t) => build_biased_peg(t),
            None => build_peg(),
        };
        return Ok(Resolved {
            circuit,
            spec: InputSpec::Peg {
                theta: theta.map(|t| t.to_string()),
            },
            variant: None,
        });
    }
    let levels = args.levels.ok_or_else(|| {
        Failure::usage("--levels is required unless --peg or an input file is given")
    })?;
    let bias = match (&args.peg_angles, theta, args.fine_grained) {
        (Some(path), _, _) => Bias::PerPeg(read_angles(path)?),
        (None, Some(t), true) => Bias::PerPeg(uniform_angles(levels, t)),
        (None, Some(t), false) => Bias::Uniform(t),
        (None, None, true) => Bias::PerPeg(uniform_angles(levels, AngleValue::half_pi())),
        (None, None, false) => Bias::Unbiased,
    };
    let spec = QgbSpec::new(levels, bias).map_err(|e| Failure::usage(e.to_string()))?;
    let circuit = spec.build().map_err(|e| Failure::usage(e.to_string()))?;
    let (bias, angles) = match spec.bias() {
        Bias::Unbiased => ("unbiased", Vec::new()),
        Bias::Uniform(t) => ("uniform", vec![t.to_string()]),
        Bias::PerPeg(a) => ("per_peg", a.iter().map(ToString::to_string).collect()),
    };
    Ok(Resolved {
        circuit,
        spec: InputSpec::Board {
            levels,
            bias: bias.to_owned(),
            angles,
        },
        variant: Some(spec.bound_variant()),
    })
}

pub fn resolve_file(path: &PathBuf) -> Result<Resolved, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::runtime(format!("cannot read {}: {e}", path.display())))?;
    let circuit = qasm::parse_circuit(&text)
        .map_err(|e| Failure::parse(format!("{}:{e}", path.display())))?;
    Ok(Resolved {
        spec: InputSpec::file(path, &text),
        variant: None,
        circuit,
    })
}

/// A positional `.qasm` path or board flags, but not both.
pub fn resolve(file: Option<&PathBuf>, board: &BoardArgs) -> Result<Resolved, Failure> {
    match file {
        Some(_) if !board.is_empty() => Err(Failure::usage(
            "give either an input file or board flags, not both",
        )),
        Some(path) => resolve_file(path),
        None => resolve_board(board),
    }
}

/// Board depth implied by a circuit's registers, if it has the board layout
/// (`2n + 2` qubits and as many classical bits).
pub fn board_levels(circuit: &Circuit) -> Option<usize> {
    let nq = circuit.nq();
    (nq >= 4 && nq.is_multiple_of(2) && circuit.nc() == nq).then(|| (nq - 2) / 2)
}

/// Guesses which closed-form budget applies to a parsed board: barriers or a
/// rotation per peg mean fine-grained, any rotation means biased.
pub fn infer_variant(circuit: &Circuit, levels: usize) -> BoundVariant {
    use qgb_core::GateKind;
    let counts = qgb_core::gate_count(circuit);
    let rx = counts.get(GateKind::Rx);
    if counts.barriers() > 0 || (rx > 0 && rx == peg_count(levels) && levels > 1) {
        BoundVariant::FineGrained
    } else if rx > 0 {
        BoundVariant::Biased
    } else {
        BoundVariant::Unbiased
    }
}
