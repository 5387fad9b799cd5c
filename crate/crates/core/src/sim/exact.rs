use super::{render_bits, OutcomeDistribution, SimError, StateVector, PROBABILITY_FLOOR};
use crate::circuit::{Circuit, GateKind};

/// Upper bound on the number of branches explored by the exact oracle.
pub const BRANCH_BUDGET: usize = 1 << 20;

/// One terminal branch of the exact oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub probability: f64,
    pub state: StateVector,
    pub clbits: Vec<bool>,
}

impl Branch {
    pub fn bitstring(&self) -> String {
        render_bits(&self.clbits)
    }
}

/// Runs the circuit with every nondeterministic `RESET` or `MEASURE` split
/// into its two projection branches, returning all terminal branches with
/// nonzero weight.
pub fn enumerate_branches(circuit: &Circuit) -> Result<Vec<Branch>, SimError> {
    let mut leaves = Vec::new();
    walk(circuit, |leaf| leaves.push(leaf))?;
    Ok(leaves)
}

/// Exact classical outcome distribution.
pub fn exact_distribution(circuit: &Circuit) -> Result<OutcomeDistribution, SimError> {
    let mut dist = OutcomeDistribution::default();
    walk(circuit, |leaf| dist.add(leaf.bitstring(), leaf.probability))?;
    Ok(dist)
}

fn walk(circuit: &Circuit, mut emit: impl FnMut(Branch)) -> Result<(), SimError> {
    circuit.validate()?;
    let ops = circuit.ops();
    let mut explored = 1usize;
    let mut stack = vec![(
        0usize,
        Branch {
            probability: 1.0,
            state: StateVector::zero(circuit.nq()),
            clbits: vec![false; circuit.nc()],
        },
    )];

    while let Some((mut pc, mut branch)) = stack.pop() {
        while pc < ops.len() {
            let op = &ops[pc];
            pc += 1;
            match op.kind {
                GateKind::Barrier => {}
                GateKind::Measure | GateKind::Reset => {
                    let q = op.qubits[0];
                    let p1 = branch.state.probability_one(q);
                    let outcomes = [(false, 1.0 - p1), (true, p1)];
                    let live: Vec<_> = outcomes
                        .into_iter()
                        .filter(|(_, p)| *p > PROBABILITY_FLOOR)
                        .collect();
                    if live.len() == 2 {
                        explored += 1;
                        if explored > BRANCH_BUDGET {
                            return Err(SimError::BranchBudgetExceeded {
                                limit: BRANCH_BUDGET,
                            });
                        }
                        let mut other = branch.clone();
                        settle(&mut other, op.kind, q, op.clbit, true)?;
                        stack.push((pc, other));
                        settle(&mut branch, op.kind, q, op.clbit, false)?;
                    } else {
                        settle(&mut branch, op.kind, q, op.clbit, live[0].0)?;
                    }
                }
                _ => branch.state.apply_gate(op)?,
            }
        }
        emit(branch);
    }
    Ok(())
}

fn settle(
    branch: &mut Branch,
    kind: GateKind,
    q: usize,
    clbit: Option<usize>,
    bit: bool,
) -> Result<(), SimError> {
    branch.probability *= branch.state.project(q, bit)?;
    match kind {
        GateKind::Measure => {
            if let Some(c) = clbit {
                branch.clbits[c] = bit;
            }
        }
        _ if bit => branch
            .state
            .apply_gate(&crate::circuit::GateOp::new(GateKind::X, &[q]))?,
        _ => {}
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unmeasured_bits_read_zero() {
        let mut c = Circuit::new(2, 3);
        c.x(0);
        let dist = exact_distribution(&c).unwrap();
        assert_eq!(dist.get("000"), 1.0);
    }

    #[test]
    fn bell_pair_splits_evenly() {
        let mut c = Circuit::new(2, 2);
        c.h(0).cx(0, 1).measure(0, 0).measure(1, 1);
        let dist = exact_distribution(&c).unwrap();
        assert_eq!(dist.len(), 2);
        assert!((dist.get("00") - 0.5).abs() < 1e-12);
        assert!((dist.get("11") - 0.5).abs() < 1e-12);
    }

    #[test]
    fn reset_twice_equals_reset_once() {
        let mut once = Circuit::new(2, 2);
        once.h(0).cx(0, 1).reset(0).h(0).measure(0, 0).measure(1, 1);
        let mut twice = Circuit::new(2, 2);
        twice
            .h(0)
            .cx(0, 1)
            .reset(0)
            .reset(0)
            .h(0)
            .measure(0, 0)
            .measure(1, 1);
        let a = exact_distribution(&once).unwrap();
        let b = exact_distribution(&twice).unwrap();
        assert!(a.linf_distance(&b) < 1e-12);
    }

    #[test]
    fn budget_is_enforced() {
        // 21 independent coin flips need 2^21 leaves.
        let mut c = Circuit::new(1, 1);
        for _ in 0..21 {
            c.h(0).measure(0, 0);
        }
        assert_eq!(
            exact_distribution(&c),
            Err(SimError::BranchBudgetExceeded {
                limit: BRANCH_BUDGET
            })
        );
    }

    #[test]
    fn invalid_circuit_is_rejected() {
        let mut c = Circuit::new(1, 0);
        c.x(3);
        assert!(matches!(exact_distribution(&c), Err(SimError::Invalid(_))));
    }
}
