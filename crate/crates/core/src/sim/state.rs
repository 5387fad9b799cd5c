use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::SimError;
use crate::circuit::{GateKind, GateOp};

/// Branches with probability at or below this are treated as impossible.
///
/// Sits under the 2⁻⁵³ resolution of a uniform `f64` draw, so sampling can
/// never legitimately select such a branch.
pub const PROBABILITY_FLOOR: f64 = 1e-15;

type Matrix2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Dense state over `nq` qubits. Basis index bit `k` is qubit `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    nq: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero(nq: usize) -> Self {
        let mut amps = vec![ZERO; 1 << nq];
        amps[0] = Complex64::new(1.0, 0.0);
        Self { nq, amps }
    }

    pub fn basis(nq: usize, index: usize) -> Self {
        let mut amps = vec![ZERO; 1 << nq];
        amps[index] = Complex64::new(1.0, 0.0);
        Self { nq, amps }
    }

    /// Wraps raw amplitudes; the length must be `2^nq`. No normalisation is applied.
    pub fn from_amplitudes(nq: usize, amps: Vec<Complex64>) -> Option<Self> {
        (amps.len() == 1 << nq).then_some(Self { nq, amps })
    }

    pub fn nq(&self) -> usize {
        self.nq
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub(crate) fn set_zero(&mut self) {
        self.amps.fill(ZERO);
        self.amps[0] = Complex64::new(1.0, 0.0);
    }

    /// Applies a unitary instruction in place.
    pub fn apply_gate(&mut self, op: &GateOp) -> Result<(), SimError> {
        let q = &op.qubits;
        match op.kind {
            GateKind::H => {
                let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
                self.apply_1q(q[0], [[h, h], [h, -h]]);
            }
            GateKind::X => self.apply_x(q[0]),
            GateKind::Rx => {
                let theta = op
                    .angle
                    .ok_or(SimError::NonUnitary(GateKind::Rx))?
                    .radians();
                let c = Complex64::new((theta / 2.0).cos(), 0.0);
                let s = Complex64::new(0.0, -(theta / 2.0).sin());
                self.apply_1q(q[0], [[c, s], [s, c]]);
            }
            GateKind::T => self.apply_phase(
                q[0],
                Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4),
            ),
            GateKind::Tdg => self.apply_phase(
                q[0],
                Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4),
            ),
            GateKind::Cx => self.apply_cx(q[0], q[1]),
            GateKind::Swap => self.apply_swap(q[0], q[1]),
            GateKind::Cswap => self.apply_cswap(q[0], q[1], q[2]),
            kind @ (GateKind::Reset | GateKind::Measure | GateKind::Barrier) => {
                return Err(SimError::NonUnitary(kind))
            }
        }
        Ok(())
    }

    fn apply_1q(&mut self, q: usize, m: Matrix2) {
        let stride = 1 << q;
        for block in self.amps.chunks_exact_mut(2 * stride) {
            let (lo, hi) = block.split_at_mut(stride);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = m[0][0] * x + m[0][1] * y;
                *b = m[1][0] * x + m[1][1] * y;
            }
        }
    }

    fn apply_phase(&mut self, q: usize, phase: Complex64) {
        let mask = 1 << q;
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & mask != 0 {
                *a *= phase;
            }
        }
    }

    fn apply_x(&mut self, q: usize) {
        let stride = 1 << q;
        for block in self.amps.chunks_exact_mut(2 * stride) {
            let (lo, hi) = block.split_at_mut(stride);
            lo.swap_with_slice(hi);
        }
    }

    fn apply_cx(&mut self, control: usize, target: usize) {
        let (c, t) = (1 << control, 1 << target);
        for i in 0..self.amps.len() {
            if i & c != 0 && i & t == 0 {
                self.amps.swap(i, i | t);
            }
        }
    }

    fn apply_swap(&mut self, a: usize, b: usize) {
        let (ma, mb) = (1 << a, 1 << b);
        for i in 0..self.amps.len() {
            if i & ma != 0 && i & mb == 0 {
                self.amps.swap(i, i ^ ma ^ mb);
            }
        }
    }

    fn apply_cswap(&mut self, control: usize, a: usize, b: usize) {
        let (c, ma, mb) = (1 << control, 1 << a, 1 << b);
        for i in 0..self.amps.len() {
            if i & c != 0 && i & ma != 0 && i & mb == 0 {
                self.amps.swap(i, i ^ ma ^ mb);
            }
        }
    }

    /// Born probability of reading `1` on qubit `q`.
    pub fn probability_one(&self, q: usize) -> f64 {
        let mask = 1 << q;
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Projects qubit `q` onto `bit` and renormalises. Returns the branch probability.
    pub fn project(&mut self, q: usize, bit: bool) -> Result<f64, SimError> {
        let p1 = self.probability_one(q);
        let p = if bit { p1 } else { 1.0 - p1 };
        if p <= PROBABILITY_FLOOR {
            return Err(SimError::ZeroNorm { qubit: q, bit });
        }
        self.project_unchecked(q, bit, p);
        Ok(p)
    }

    fn project_unchecked(&mut self, q: usize, bit: bool, p: f64) {
        let mask = 1 << q;
        let scale = 1.0 / p.sqrt();
        for (i, a) in self.amps.iter_mut().enumerate() {
            if (i & mask != 0) == bit {
                *a *= scale;
            } else {
                *a = ZERO;
            }
        }
    }

    /// Measures qubit `q` using a uniform draw in `[0, 1)`.
    ///
    /// The outcome is `0` when `randomness < P(0)`, otherwise `1`; a branch at
    /// or below [`PROBABILITY_FLOOR`] is never selected.
    pub fn measure_qubit(&mut self, q: usize, randomness: f64) -> Result<bool, SimError> {
        let p1 = self.probability_one(q);
        let p0 = 1.0 - p1;
        let bit = if p0 <= PROBABILITY_FLOOR {
            true
        } else if p1 <= PROBABILITY_FLOOR {
            false
        } else {
            randomness >= p0
        };
        self.project(q, bit)?;
        Ok(bit)
    }

    /// Returns qubit `q` to `|0⟩`: measure, then flip if the outcome was `1`.
    pub fn reset_qubit(&mut self, q: usize, randomness: f64) -> Result<(), SimError> {
        if self.measure_qubit(q, randomness)? {
            self.apply_x(q);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::AngleValue;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_state(state: &StateVector, expected: &[(usize, Complex64)]) {
        for (i, a) in state.amplitudes().iter().enumerate() {
            let want = expected
                .iter()
                .find(|(j, _)| *j == i)
                .map(|(_, v)| *v)
                .unwrap_or(ZERO);
            assert_abs_diff_eq!(a.re, want.re, epsilon = 1e-12);
            assert_abs_diff_eq!(a.im, want.im, epsilon = 1e-12);
        }
    }

    #[test]
    fn hadamard_on_zero() {
        let mut s = StateVector::zero(1);
        s.apply_gate(&GateOp::new(GateKind::H, &[0])).unwrap();
        assert_state(
            &s,
            &[(0, c(FRAC_1_SQRT_2, 0.0)), (1, c(FRAC_1_SQRT_2, 0.0))],
        );
    }

    #[test]
    fn rx_two_thirds_pi_on_zero() {
        let mut s = StateVector::zero(1);
        s.apply_gate(&GateOp::rx(AngleValue::pi_fraction(2, 3).unwrap(), 0))
            .unwrap();
        assert_state(&s, &[(0, c(0.5, 0.0)), (1, c(0.0, -(3f64.sqrt()) / 2.0))]);
    }

    #[test]
    fn peg_sequence_reaches_the_two_output_state() {
        let mut s = StateVector::zero(4);
        for op in [
            GateOp::new(GateKind::H, &[0]),
            GateOp::new(GateKind::X, &[2]),
            GateOp::new(GateKind::Cswap, &[0, 1, 2]),
            GateOp::new(GateKind::Cx, &[2, 0]),
            GateOp::new(GateKind::Cswap, &[0, 2, 3]),
        ] {
            s.apply_gate(&op).unwrap();
        }
        assert_state(
            &s,
            &[
                (0b0011, c(FRAC_1_SQRT_2, 0.0)),
                (0b1001, c(FRAC_1_SQRT_2, 0.0)),
            ],
        );
    }

    #[test]
    fn two_qubit_kernels_follow_operand_order() {
        // |q1 q0> = |01>: CX(0 -> 1) fires, CX(1 -> 0) does not.
        let mut s = StateVector::basis(2, 0b01);
        s.apply_gate(&GateOp::new(GateKind::Cx, &[1, 0])).unwrap();
        assert_state(&s, &[(0b01, c(1.0, 0.0))]);
        s.apply_gate(&GateOp::new(GateKind::Cx, &[0, 1])).unwrap();
        assert_state(&s, &[(0b11, c(1.0, 0.0))]);

        let mut s = StateVector::basis(3, 0b010);
        s.apply_gate(&GateOp::new(GateKind::Swap, &[1, 2])).unwrap();
        assert_state(&s, &[(0b100, c(1.0, 0.0))]);
        s.apply_gate(&GateOp::new(GateKind::Cswap, &[0, 1, 2]))
            .unwrap();
        assert_state(&s, &[(0b100, c(1.0, 0.0))]);
        s.apply_gate(&GateOp::new(GateKind::X, &[0])).unwrap();
        s.apply_gate(&GateOp::new(GateKind::Cswap, &[0, 1, 2]))
            .unwrap();
        assert_state(&s, &[(0b011, c(1.0, 0.0))]);
    }

    #[test]
    fn t_squares_to_s() {
        let mut s = StateVector::basis(1, 1);
        let t = GateOp::new(GateKind::T, &[0]);
        s.apply_gate(&t).unwrap();
        s.apply_gate(&t).unwrap();
        assert_state(&s, &[(1, c(0.0, 1.0))]);
        let tdg = GateOp::new(GateKind::Tdg, &[0]);
        s.apply_gate(&tdg).unwrap();
        s.apply_gate(&tdg).unwrap();
        assert_state(&s, &[(1, c(1.0, 0.0))]);
    }

    #[test]
    fn non_unitary_ops_are_rejected() {
        let mut s = StateVector::zero(1);
        assert!(matches!(
            s.apply_gate(&GateOp::new(GateKind::Reset, &[0])),
            Err(SimError::NonUnitary(GateKind::Reset))
        ));
        assert!(matches!(
            s.apply_gate(&GateOp::measure(0, 0)),
            Err(SimError::NonUnitary(GateKind::Measure))
        ));
    }

    #[test]
    fn measuring_a_basis_state_ignores_randomness() {
        for r in [0.0, 0.5, 0.999] {
            let mut s = StateVector::basis(1, 1);
            assert!(s.measure_qubit(0, r).unwrap());
            assert_state(&s, &[(1, c(1.0, 0.0))]);
        }
    }

    #[test]
    fn measurement_threshold_semantics() {
        let plus = || {
            let mut s = StateVector::zero(1);
            s.apply_gate(&GateOp::new(GateKind::H, &[0])).unwrap();
            s
        };
        let mut low = plus();
        assert!(!low.measure_qubit(0, 0.0).unwrap());
        assert_state(&low, &[(0, c(1.0, 0.0))]);
        let mut high = plus();
        assert!(high.measure_qubit(0, 0.999).unwrap());
        assert_state(&high, &[(1, c(1.0, 0.0))]);
    }

    #[test]
    fn reset_keeps_the_partner_qubit_per_branch() {
        let bell = || {
            let mut s = StateVector::zero(2);
            s.apply_gate(&GateOp::new(GateKind::H, &[0])).unwrap();
            s.apply_gate(&GateOp::new(GateKind::Cx, &[0, 1])).unwrap();
            s
        };
        let mut a = bell();
        a.reset_qubit(0, 0.1).unwrap();
        assert_state(&a, &[(0b00, c(1.0, 0.0))]);
        let mut b = bell();
        b.reset_qubit(0, 0.9).unwrap();
        assert_state(&b, &[(0b10, c(1.0, 0.0))]);
    }

    #[test]
    fn reset_of_zero_is_a_no_op() {
        let mut s = StateVector::zero(2);
        s.apply_gate(&GateOp::new(GateKind::H, &[1])).unwrap();
        let before = s.clone();
        s.reset_qubit(0, 0.7).unwrap();
        assert_eq!(s, before);
    }

    #[test]
    fn projecting_onto_an_empty_branch_fails() {
        let mut s = StateVector::zero(1);
        assert!(matches!(
            s.project(0, true),
            Err(SimError::ZeroNorm {
                qubit: 0,
                bit: true
            })
        ));
    }
}
