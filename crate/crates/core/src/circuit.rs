//! Circuit intermediate representation shared by the builders, the simulator
//! and the OpenQASM front end.

use std::fmt;

use thiserror::Error;

use crate::angle::AngleValue;

/// Instruction kinds understood by every part of the toolchain.
///
/// `T` and `Tdg` only appear in circuits produced by
/// [`decompose_cswap`](crate::decompose::decompose_cswap).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GateKind {
    H,
    X,
    Rx,
    T,
    Tdg,
    Cx,
    Cswap,
    Swap,
    Reset,
    Measure,
    Barrier,
}

impl GateKind {
    pub const ALL: [GateKind; 11] = [
        GateKind::H,
        GateKind::X,
        GateKind::Rx,
        GateKind::T,
        GateKind::Tdg,
        GateKind::Cx,
        GateKind::Cswap,
        GateKind::Swap,
        GateKind::Reset,
        GateKind::Measure,
        GateKind::Barrier,
    ];

    /// Fixed qubit arity; `None` for barriers, which take any nonempty set.
    pub fn arity(self) -> Option<usize> {
        match self {
            GateKind::H
            | GateKind::X
            | GateKind::Rx
            | GateKind::T
            | GateKind::Tdg
            | GateKind::Reset
            | GateKind::Measure => Some(1),
            GateKind::Cx | GateKind::Swap => Some(2),
            GateKind::Cswap => Some(3),
            GateKind::Barrier => None,
        }
    }

    pub fn is_unitary(self) -> bool {
        !matches!(
            self,
            GateKind::Reset | GateKind::Measure | GateKind::Barrier
        )
    }

    pub fn qasm_name(self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Rx => "rx",
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
            GateKind::Cx => "cx",
            GateKind::Cswap => "cswap",
            GateKind::Swap => "swap",
            GateKind::Reset => "reset",
            GateKind::Measure => "measure",
            GateKind::Barrier => "barrier",
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GateKind::H => "H",
            GateKind::X => "X",
            GateKind::Rx => "RX",
            GateKind::T => "T",
            GateKind::Tdg => "TDG",
            GateKind::Cx => "CX",
            GateKind::Cswap => "CSWAP",
            GateKind::Swap => "SWAP",
            GateKind::Reset => "RESET",
            GateKind::Measure => "MEASURE",
            GateKind::Barrier => "BARRIER",
        })
    }
}

/// One circuit instruction.
///
/// Operand order follows OpenQASM: `CX` is `(control, target)`, `CSWAP` is
/// `(control, a, b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GateOp {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
    pub angle: Option<AngleValue>,
    pub clbit: Option<usize>,
}

impl GateOp {
    pub fn new(kind: GateKind, qubits: &[usize]) -> Self {
        Self {
            kind,
            qubits: qubits.to_vec(),
            angle: None,
            clbit: None,
        }
    }

    pub fn rx(angle: AngleValue, qubit: usize) -> Self {
        Self {
            angle: Some(angle),
            ..Self::new(GateKind::Rx, &[qubit])
        }
    }

    pub fn measure(qubit: usize, clbit: usize) -> Self {
        Self {
            clbit: Some(clbit),
            ..Self::new(GateKind::Measure, &[qubit])
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    QubitOutOfRange { qubit: usize, nq: usize },
    ClbitOutOfRange { clbit: usize, nc: usize },
    DuplicateQubit(usize),
    WrongArity { expected: usize, found: usize },
    EmptyBarrier,
    MissingClbit,
    UnexpectedClbit,
    MissingAngle,
    UnexpectedAngle,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::QubitOutOfRange { qubit, nq } => {
                write!(f, "qubit {qubit} out of range for {nq} qubits")
            }
            Violation::ClbitOutOfRange { clbit, nc } => {
                write!(f, "classical bit {clbit} out of range for {nc} bits")
            }
            Violation::DuplicateQubit(q) => write!(f, "qubit {q} used twice"),
            Violation::WrongArity { expected, found } => {
                write!(f, "expected {expected} qubit operands, found {found}")
            }
            Violation::EmptyBarrier => f.write_str("barrier without operands"),
            Violation::MissingClbit => f.write_str("measure without a classical target"),
            Violation::UnexpectedClbit => f.write_str("classical target on a non-measure op"),
            Violation::MissingAngle => f.write_str("rx without an angle"),
            Violation::UnexpectedAngle => f.write_str("angle on a gate that takes none"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid op #{index} ({kind}): {violation}")]
pub struct ValidationError {
    pub index: usize,
    pub kind: GateKind,
    pub violation: Violation,
}

/// An ordered instruction list over `nq` qubits and `nc` classical bits.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    nq: usize,
    nc: usize,
    ops: Vec<GateOp>,
}

impl Circuit {
    pub fn new(nq: usize, nc: usize) -> Self {
        Self {
            nq,
            nc,
            ops: Vec::new(),
        }
    }

    pub fn from_ops(nq: usize, nc: usize, ops: Vec<GateOp>) -> Self {
        Self { nq, nc, ops }
    }

    pub fn nq(&self) -> usize {
        self.nq
    }

    pub fn nc(&self) -> usize {
        self.nc
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn into_ops(self) -> Vec<GateOp> {
        self.ops
    }

    pub fn push(&mut self, op: GateOp) -> &mut Self {
        self.ops.push(op);
        self
    }

    pub fn h(&mut self, q: usize) -> &mut Self {
        self.push(GateOp::new(GateKind::H, &[q]))
    }

    pub fn x(&mut self, q: usize) -> &mut Self {
        self.push(GateOp::new(GateKind::X, &[q]))
    }

    pub fn rx(&mut self, angle: AngleValue, q: usize) -> &mut Self {
        self.push(GateOp::rx(angle, q))
    }

    pub fn cx(&mut self, control: usize, target: usize) -> &mut Self {
        self.push(GateOp::new(GateKind::Cx, &[control, target]))
    }

    pub fn cswap(&mut self, control: usize, a: usize, b: usize) -> &mut Self {
        self.push(GateOp::new(GateKind::Cswap, &[control, a, b]))
    }

    pub fn swap(&mut self, a: usize, b: usize) -> &mut Self {
        self.push(GateOp::new(GateKind::Swap, &[a, b]))
    }

    pub fn reset(&mut self, q: usize) -> &mut Self {
        self.push(GateOp::new(GateKind::Reset, &[q]))
    }

    pub fn measure(&mut self, q: usize, c: usize) -> &mut Self {
        self.push(GateOp::measure(q, c))
    }

    pub fn barrier(&mut self, qubits: &[usize]) -> &mut Self {
        self.push(GateOp::new(GateKind::Barrier, qubits))
    }

    /// Copy of this circuit with every `MEASURE` removed.
    pub fn without_measurements(&self) -> Circuit {
        let ops = self
            .ops
            .iter()
            .filter(|op| op.kind != GateKind::Measure)
            .cloned()
            .collect();
        Circuit::from_ops(self.nq, self.nc, ops)
    }

    /// Checks every structural invariant and reports the first violation.
    pub fn validate(&self) -> Result<(), ValidationError> {
        for (index, op) in self.ops.iter().enumerate() {
            check_op(op, self.nq, self.nc).map_err(|violation| ValidationError {
                index,
                kind: op.kind,
                violation,
            })?;
        }
        Ok(())
    }
}

fn check_op(op: &GateOp, nq: usize, nc: usize) -> Result<(), Violation> {
    match op.kind.arity() {
        Some(expected) if op.qubits.len() != expected => {
            return Err(Violation::WrongArity {
                expected,
                found: op.qubits.len(),
            })
        }
        None if op.qubits.is_empty() => return Err(Violation::EmptyBarrier),
        _ => {}
    }
    for (i, &q) in op.qubits.iter().enumerate() {
        if q >= nq {
            return Err(Violation::QubitOutOfRange { qubit: q, nq });
        }
        if op.qubits[..i].contains(&q) {
            return Err(Violation::DuplicateQubit(q));
        }
    }
    match (op.kind, op.clbit) {
        (GateKind::Measure, None) => return Err(Violation::MissingClbit),
        (GateKind::Measure, Some(c)) if c >= nc => {
            return Err(Violation::ClbitOutOfRange { clbit: c, nc })
        }
        (GateKind::Measure, Some(_)) => {}
        (_, Some(_)) => return Err(Violation::UnexpectedClbit),
        (_, None) => {}
    }
    match (op.kind, op.angle) {
        (GateKind::Rx, None) => Err(Violation::MissingAngle),
        (GateKind::Rx, Some(_)) | (_, None) => Ok(()),
        (_, Some(_)) => Err(Violation::UnexpectedAngle),
    }
}
