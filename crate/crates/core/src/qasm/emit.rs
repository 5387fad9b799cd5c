use std::fmt::Write;

use crate::circuit::{Circuit, GateKind};

/// Emits `circuit` with registers named `q` and `c`.
pub fn emit(circuit: &Circuit) -> String {
    emit_with_names(circuit, "q", "c")
}

/// One statement per line: header, `qelib1.inc`, register declarations, then
/// the ops in order. The classical register is omitted when the circuit has
/// no classical bits.
pub fn emit_with_names(circuit: &Circuit, qreg: &str, creg: &str) -> String {
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n\n");
    let _ = writeln!(out, "qreg {qreg}[{}];", circuit.nq());
    if circuit.nc() > 0 {
        let _ = writeln!(out, "creg {creg}[{}];", circuit.nc());
    }
    out.push('\n');

    for op in circuit.ops() {
        let operands = op
            .qubits
            .iter()
            .map(|q| format!("{qreg}[{q}]"))
            .collect::<Vec<_>>()
            .join(",");
        match op.kind {
            GateKind::Measure => {
                let c = op.clbit.unwrap_or_default();
                let _ = writeln!(out, "measure {operands} -> {creg}[{c}];");
            }
            GateKind::Rx => {
                let angle = op.angle.map(|a| a.to_string()).unwrap_or_default();
                let _ = writeln!(out, "rx({angle}) {operands};");
            }
            kind => {
                let _ = writeln!(out, "{} {operands};", kind.qasm_name());
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::AngleValue;

    #[test]
    fn board_style_lines() {
        let mut c = Circuit::new(3, 3);
        c.reset(0)
            .x(1)
            .rx(AngleValue::pi_fraction(2, 3).unwrap(), 0)
            .cswap(0, 1, 2)
            .cx(2, 0)
            .barrier(&[0, 1])
            .measure(1, 1);
        let text = emit(&c);
        let expected = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n\nqreg q[3];\ncreg c[3];\n\n\
            reset q[0];\nx q[1];\nrx(2*pi/3) q[0];\ncswap q[0],q[1],q[2];\ncx q[2],q[0];\n\
            barrier q[0],q[1];\nmeasure q[1] -> c[1];\n";
        assert_eq!(text, expected);
    }

    #[test]
    fn no_classical_register_when_unused() {
        let text = emit(&Circuit::new(2, 0));
        assert!(!text.contains("creg"));
    }
}
