use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{render_bits, Histogram, SimError, StateVector};
use crate::circuit::{Circuit, GateKind};

/// Classical register contents after one shot.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ShotResult {
    pub clbits: Vec<bool>,
}

impl ShotResult {
    pub fn bitstring(&self) -> String {
        render_bits(&self.clbits)
    }
}

/// Randomness for one shot: the ChaCha8 keystream keyed by `seed`, on the
/// stream selected by `shot_index`. Streams are independent, so any shot can
/// be replayed without running the ones before it.
pub fn shot_rng(seed: u64, shot_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shot_index);
    rng
}

/// Runs a single shot. Deterministic in `(circuit, seed, shot_index)`.
pub fn run_shot(circuit: &Circuit, seed: u64, shot_index: u64) -> Result<ShotResult, SimError> {
    circuit.validate()?;
    let mut state = StateVector::zero(circuit.nq());
    execute(circuit, &mut state, seed, shot_index)
}

fn execute(
    circuit: &Circuit,
    state: &mut StateVector,
    seed: u64,
    shot_index: u64,
) -> Result<ShotResult, SimError> {
    let mut rng = shot_rng(seed, shot_index);
    let mut clbits = vec![false; circuit.nc()];
    for op in circuit.ops() {
        match op.kind {
            GateKind::Barrier => {}
            GateKind::Measure => {
                let bit = state.measure_qubit(op.qubits[0], rng.random())?;
                if let Some(c) = op.clbit {
                    clbits[c] = bit;
                }
            }
            GateKind::Reset => state.reset_qubit(op.qubits[0], rng.random())?,
            _ => state.apply_gate(op)?,
        }
    }
    Ok(ShotResult { clbits })
}

/// Histogram of shots `0..shots` on the current rayon pool.
pub fn run_shots(circuit: &Circuit, shots: u64, seed: u64) -> Result<Histogram, SimError> {
    circuit.validate()?;
    if shots == 0 {
        return Err(SimError::NoShots);
    }
    (0..shots)
        .into_par_iter()
        .try_fold(
            || (Histogram::new(), StateVector::zero(circuit.nq())),
            |(mut hist, mut state), i| {
                state.set_zero();
                let shot = execute(circuit, &mut state, seed, i)?;
                hist.record(shot.bitstring());
                Ok((hist, state))
            },
        )
        .map(|r| r.map(|(hist, _)| hist))
        .try_reduce(Histogram::new, |a, b| Ok(a.merge(b)))
}

/// [`run_shots`] on a dedicated pool of `workers` threads. The result does not
/// depend on `workers`.
pub fn run_shots_with_workers(
    circuit: &Circuit,
    shots: u64,
    seed: u64,
    workers: usize,
) -> Result<Histogram, SimError> {
    match rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
    {
        Ok(pool) => pool.install(|| run_shots(circuit, shots, seed)),
        Err(_) => run_shots(circuit, shots, seed),
    }
}
