//! Structural analyses over a [`Circuit`]: gate tallies and layered depth.

use std::collections::BTreeMap;
use std::fmt;

use crate::circuit::{Circuit, GateKind};

/// Per-kind tally of a circuit's instructions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GateCounts {
    counts: BTreeMap<GateKind, usize>,
}

impl GateCounts {
    pub fn get(&self, kind: GateKind) -> usize {
        self.counts.get(&kind).copied().unwrap_or(0)
    }

    /// Every instruction except barriers. Measurements count.
    pub fn total_active(&self) -> usize {
        self.counts
            .iter()
            .filter(|(k, _)| **k != GateKind::Barrier)
            .map(|(_, n)| n)
            .sum()
    }

    pub fn barriers(&self) -> usize {
        self.get(GateKind::Barrier)
    }

    /// Nonzero entries in [`GateKind`] order.
    pub fn iter(&self) -> impl Iterator<Item = (GateKind, usize)> + '_ {
        self.counts.iter().map(|(k, n)| (*k, *n))
    }
}

impl<const N: usize> From<[(GateKind, usize); N]> for GateCounts {
    fn from(entries: [(GateKind, usize); N]) -> Self {
        Self {
            counts: entries.into_iter().filter(|(_, n)| *n > 0).collect(),
        }
    }
}

impl fmt::Display for GateCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, n)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}:{n}")?;
        }
        f.write_str("}")
    }
}

pub fn gate_count(circuit: &Circuit) -> GateCounts {
    let mut counts = BTreeMap::new();
    for op in circuit.ops() {
        *counts.entry(op.kind).or_insert(0) += 1;
    }
    GateCounts { counts }
}

/// Greedy left-to-right layering depth.
///
/// Each op lands in the first layer after the latest layer touching any of its
/// qubit or classical operands. A barrier contributes no layer of its own but
/// pulls all of its qubits up to the latest layer among them.
pub fn depth(circuit: &Circuit) -> usize {
    let mut qubit_front = vec![0usize; circuit.nq()];
    let mut clbit_front = vec![0usize; circuit.nc()];
    for op in circuit.ops() {
        let mut layer = op.qubits.iter().map(|&q| qubit_front[q]).max().unwrap_or(0);
        if op.kind == GateKind::Barrier {
            for &q in &op.qubits {
                qubit_front[q] = layer;
            }
            continue;
        }
        if let Some(c) = op.clbit {
            layer = layer.max(clbit_front[c]);
        }
        layer += 1;
        for &q in &op.qubits {
            qubit_front[q] = layer;
        }
        if let Some(c) = op.clbit {
            clbit_front[c] = layer;
        }
    }
    qubit_front
        .into_iter()
        .chain(clbit_front)
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_counts_are_zero() {
        let counts = gate_count(&Circuit::new(3, 3));
        for kind in GateKind::ALL {
            assert_eq!(counts.get(kind), 0);
        }
        assert_eq!(counts.total_active(), 0);
        assert_eq!(depth(&Circuit::new(3, 3)), 0);
    }

    #[test]
    fn barriers_are_excluded_from_total() {
        let mut c = Circuit::new(2, 1);
        c.h(0).barrier(&[0, 1]).measure(0, 0);
        let counts = gate_count(&c);
        assert_eq!(counts.total_active(), 2);
        assert_eq!(counts.barriers(), 1);
    }

    #[test]
    fn single_gate_depth() {
        let mut c = Circuit::new(1, 0);
        c.h(0);
        assert_eq!(depth(&c), 1);
    }

    #[test]
    fn disjoint_ops_share_a_layer() {
        let mut c = Circuit::new(2, 0);
        c.h(0).x(1);
        assert_eq!(depth(&c), 1);
    }

    #[test]
    fn barrier_fences_its_operands() {
        let mut c = Circuit::new(2, 0);
        c.h(0).h(0).barrier(&[0, 1]).x(1);
        assert_eq!(depth(&c), 3);

        let mut unfenced = Circuit::new(2, 0);
        unfenced.h(0).h(0).x(1);
        assert_eq!(depth(&unfenced), 2);
    }

    #[test]
    fn measurements_serialise_on_a_shared_clbit() {
        let mut c = Circuit::new(2, 1);
        c.measure(0, 0).measure(1, 0);
        assert_eq!(depth(&c), 2);
    }

    #[test]
    fn peg_depth_by_hand() {
        // Layers: {H q0, X q2} {CSWAP 0,1,2} {CX 2->0, MEASURE q1} {CSWAP 0,2,3} {MEASURE q3}
        let mut c = Circuit::new(4, 2);
        c.h(0)
            .x(2)
            .cswap(0, 1, 2)
            .cx(2, 0)
            .cswap(0, 2, 3)
            .measure(1, 0)
            .measure(3, 1);
        assert_eq!(depth(&c), 5);
    }
}
