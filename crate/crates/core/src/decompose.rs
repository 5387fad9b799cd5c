//! Rewrites controlled-SWAPs into CX plus single-qubit gates.

use crate::circuit::{Circuit, GateKind, GateOp};

/// Ops emitted per CSWAP: CX, the 15-op Toffoli, CX.
pub const OPS_PER_CSWAP: usize = 17;

/// Replaces each `CSWAP(c; a, b)` by `CX(b→a) · CCX(c, a → b) · CX(b→a)` with
/// the Toffoli expanded into 6 CX and 9 single-qubit gates (H, T, T†).
/// All other ops are copied through unchanged.
pub fn decompose_cswap(circuit: &Circuit) -> Circuit {
    let mut out = Circuit::new(circuit.nq(), circuit.nc());
    for op in circuit.ops() {
        if op.kind == GateKind::Cswap {
            let (c, a, b) = (op.qubits[0], op.qubits[1], op.qubits[2]);
            out.cx(b, a);
            push_toffoli(&mut out, c, a, b);
            out.cx(b, a);
        } else {
            out.push(op.clone());
        }
    }
    out
}

fn push_toffoli(out: &mut Circuit, c0: usize, c1: usize, target: usize) {
    let t = |q| GateOp::new(GateKind::T, &[q]);
    let tdg = |q| GateOp::new(GateKind::Tdg, &[q]);
    out.h(target)
        .cx(c1, target)
        .push(tdg(target))
        .cx(c0, target)
        .push(t(target))
        .cx(c1, target)
        .push(tdg(target))
        .cx(c0, target)
        .push(t(c1))
        .push(t(target))
        .h(target)
        .cx(c0, c1)
        .push(t(c0))
        .push(tdg(c1))
        .cx(c0, c1);
}
