//! Generators for quantum Galton board circuits.
//!
//! Register layout for an `n`-level board: qubit 0 is the control, qubits
//! `1..=2n+1` are the working register, and the ball starts on the centre
//! qubit `n+1`. Every working qubit `q` is measured into classical bit `q`, so
//! the register has `2n+2` classical bits and bit 0 always reads 0. A ball
//! finishing on qubit `2k+1` encodes bin `k`.
//!
//! Level `ℓ` (1-based, top first) holds `ℓ` pegs centred on qubits
//! `n+2-ℓ, n+4-ℓ, …, n+ℓ`. Each peg is `CSWAP(c-1, c)`, `CX(c → control)`,
//! `CSWAP(c, c+1)`; when pegs are chained on one control preparation the
//! trailing CX of one peg doubles as the rebalancing CX of the next.
//!
//! In the layered boards ([`build_qgb`], [`build_biased_qgb`]) a non-final
//! level runs its leftmost peg upwards, then one rebalancing CX, then the
//! remaining pegs from the right end downwards. The final level is one
//! ascending chain across the whole register.
//!
//! The fine-grained board ([`build_fine_grained_qgb`]) gives every peg its own
//! `RESET` + `RX(θ)` preparation and visits pegs row by row, left to right.
//! Angles are consumed in that same order (row-major, top row first). Every
//! peg but the first in a row can leave the ball on its centre qubit; that is
//! repaired at the start of the next row (or before measurement) by
//! `CX(c → c-1)` followed by `RESET c`. Rows from the second onwards end with
//! two barriers, one over qubits `0..=n` and one over `n+1..=2n+1`.

use thiserror::Error;

use crate::angle::AngleValue;
use crate::circuit::Circuit;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("a board needs at least one level")]
    ZeroLevels,
    #[error("expected {expected} peg angles for this board, got {found}")]
    WrongAngleCount { expected: usize, found: usize },
}

/// Number of pegs on an `n`-level board.
pub fn peg_count(levels: usize) -> usize {
    levels * (levels + 1) / 2
}

/// How the pegs of a board are biased.
#[derive(Debug, Clone, PartialEq)]
pub enum Bias {
    Unbiased,
    /// Every `H` replaced by `RX(θ)`.
    Uniform(AngleValue),
    /// One angle per peg, row-major with the top row first.
    PerPeg(Vec<AngleValue>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct QgbSpec {
    levels: usize,
    bias: Bias,
}

impl QgbSpec {
    pub fn new(levels: usize, bias: Bias) -> Result<Self, BuildError> {
        if levels == 0 {
            return Err(BuildError::ZeroLevels);
        }
        if let Bias::PerPeg(angles) = &bias {
            let expected = peg_count(levels);
            if angles.len() != expected {
                return Err(BuildError::WrongAngleCount {
                    expected,
                    found: angles.len(),
                });
            }
        }
        Ok(Self { levels, bias })
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn bias(&self) -> &Bias {
        &self.bias
    }

    pub fn bound_variant(&self) -> BoundVariant {
        match self.bias {
            Bias::Unbiased => BoundVariant::Unbiased,
            Bias::Uniform(_) => BoundVariant::Biased,
            Bias::PerPeg(_) => BoundVariant::FineGrained,
        }
    }

    pub fn build(&self) -> Result<Circuit, BuildError> {
        match &self.bias {
            Bias::Unbiased => build_qgb(self.levels),
            Bias::Uniform(theta) => build_biased_qgb(self.levels, *theta),
            Bias::PerPeg(angles) => build_fine_grained_qgb(self.levels, angles),
        }
    }
}

/// A single peg's rotation and the probability it sends the ball left.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PegBias {
    pub theta: AngleValue,
}

impl PegBias {
    pub fn new(theta: AngleValue) -> Self {
        Self { theta }
    }

    /// `sin²(θ/2)`: probability of ending on the lower-index output.
    pub fn p_left(&self) -> f64 {
        self.theta.left_probability()
    }
}

/// The one-peg circuit: ball on q2, outputs q1 and q3 measured into c0, c1.
pub fn build_peg() -> Circuit {
    let mut c = Circuit::new(4, 2);
    c.h(0).x(2);
    push_peg_body(&mut c);
    c
}

/// [`build_peg`] with a leading control reset and `RX(θ)` in place of `H`.
pub fn build_biased_peg(theta: AngleValue) -> Circuit {
    let mut c = Circuit::new(4, 2);
    c.reset(0).x(2).rx(theta, 0);
    push_peg_body(&mut c);
    c
}

fn push_peg_body(c: &mut Circuit) {
    c.cswap(0, 1, 2)
        .cx(2, 0)
        .cswap(0, 2, 3)
        .measure(1, 0)
        .measure(3, 1);
}

/// Unbiased `n`-level board with `H` preparing the control at every level.
pub fn build_qgb(levels: usize) -> Result<Circuit, BuildError> {
    build_layered(levels, |c| {
        c.h(0);
    })
}

/// [`build_qgb`] with every `H` replaced by `RX(θ)`.
pub fn build_biased_qgb(levels: usize, theta: AngleValue) -> Result<Circuit, BuildError> {
    build_layered(levels, |c| {
        c.rx(theta, 0);
    })
}

fn build_layered(levels: usize, prepare: impl Fn(&mut Circuit)) -> Result<Circuit, BuildError> {
    if levels == 0 {
        return Err(BuildError::ZeroLevels);
    }
    let n = levels;
    let mut c = Circuit::new(2 * n + 2, 2 * n + 2);
    for level in 1..=n {
        c.reset(0);
        if level == 1 {
            c.x(n + 1);
        }
        prepare(&mut c);
        let (lo, hi) = (n + 1 - level, n + 1 + level);
        if level == n {
            ascending_chain(&mut c, lo, hi);
        } else {
            ascending_chain(&mut c, lo, lo + 2);
            if hi > lo + 2 {
                c.cx(lo + 2, 0);
                descending_chain(&mut c, lo + 2, hi);
            }
        }
    }
    measure_working(&mut c, n);
    Ok(c)
}

/// `CSWAP(lo, lo+1), CX(lo+1), CSWAP(lo+1, lo+2), …, CSWAP(hi-1, hi)`.
fn ascending_chain(c: &mut Circuit, lo: usize, hi: usize) {
    for k in lo..hi {
        if k > lo {
            c.cx(k, 0);
        }
        c.cswap(0, k, k + 1);
    }
}

/// `CSWAP(hi-1, hi), CX(hi-1), CSWAP(hi-2, hi-1), …, CSWAP(lo, lo+1)`.
fn descending_chain(c: &mut Circuit, lo: usize, hi: usize) {
    for k in (lo + 1..=hi).rev() {
        if k < hi {
            c.cx(k, 0);
        }
        c.cswap(0, k - 1, k);
    }
}

fn measure_working(c: &mut Circuit, n: usize) {
    for q in 1..=2 * n + 1 {
        c.measure(q, q);
    }
}

/// Board with an independent rotation per peg.
pub fn build_fine_grained_qgb(levels: usize, angles: &[AngleValue]) -> Result<Circuit, BuildError> {
    if levels == 0 {
        return Err(BuildError::ZeroLevels);
    }
    let expected = peg_count(levels);
    if angles.len() != expected {
        return Err(BuildError::WrongAngleCount {
            expected,
            found: angles.len(),
        });
    }
    let n = levels;
    let lower: Vec<usize> = (0..=n).collect();
    let upper: Vec<usize> = (n + 1..=2 * n + 1).collect();
    let mut c = Circuit::new(2 * n + 2, 2 * n + 2);
    let mut angles = angles.iter();
    let mut pending: Vec<usize> = Vec::new();

    for row in 1..=n {
        let centres: Vec<usize> = (0..row).map(|j| n + 2 - row + 2 * j).collect();
        for (j, &centre) in centres.iter().enumerate() {
            let theta = *angles.next().expect("angle count checked above");
            c.reset(0);
            if row == 1 {
                c.x(n + 1);
            }
            if j == 0 {
                for &p in &pending {
                    c.cx(p, p - 1);
                }
            }
            c.rx(theta, 0);
            if j == 0 {
                for &p in &pending {
                    c.reset(p);
                }
                pending.clear();
            }
            c.cswap(0, centre - 1, centre)
                .cx(centre, 0)
                .cswap(0, centre, centre + 1);
        }
        if row >= 2 {
            c.barrier(&lower).barrier(&upper);
            pending = centres[1..].to_vec();
        }
    }
    for &p in &pending {
        c.cx(p, p - 1);
    }
    for &p in &pending {
        c.reset(p);
    }
    measure_working(&mut c, n);
    Ok(c)
}

/// `n` copies of one angle laid out for [`build_fine_grained_qgb`].
pub fn uniform_angles(levels: usize, theta: AngleValue) -> Vec<AngleValue> {
    vec![theta; peg_count(levels)]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundVariant {
    Unbiased,
    Biased,
    FineGrained,
}

/// Closed-form gate budgets for an `n`-level board.
///
/// * unbiased: `2n² + 5n + 2`
/// * biased (reset and rotation per peg): `3(n² + n) + n + 2`
/// * fine-grained: `3n² + 3n + 1`
pub fn gate_bound(levels: usize, variant: BoundVariant) -> usize {
    let n = levels;
    match variant {
        BoundVariant::Unbiased => 2 * n * n + 5 * n + 2,
        BoundVariant::Biased => 3 * (n * n + n) + n + 2,
        BoundVariant::FineGrained => 3 * n * n + 3 * n + 1,
    }
}
