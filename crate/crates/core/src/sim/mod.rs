//! Dense statevector simulation with mid-circuit measurement and reset.
//!
//! Two execution modes share the same gate kernels:
//!
//! * [`run_shot`] / [`run_shots`] sample one trajectory per shot, drawing
//!   measurement randomness from a counter-based stream keyed by
//!   `(seed, shot_index)`, so the histogram does not depend on how shots are
//!   spread over threads.
//! * [`exact_distribution`] carries both projection branches at every `RESET`
//!   and `MEASURE` and sums Born weights per classical bitstring.
//!
//! Classical bitstrings are rendered with the highest classical index first;
//! bits that are never measured read `0`.

mod exact;
mod shots;
mod state;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::circuit::{GateKind, ValidationError};

pub use exact::{enumerate_branches, exact_distribution, Branch, BRANCH_BUDGET};
pub use shots::{run_shot, run_shots, run_shots_with_workers, shot_rng, ShotResult};
pub use state::{StateVector, PROBABILITY_FLOOR};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("{0} is not a unitary gate")]
    NonUnitary(GateKind),
    #[error("projection of qubit {qubit} onto {} has zero norm", u8::from(*bit))]
    ZeroNorm { qubit: usize, bit: bool },
    #[error("exact simulation needs more than {limit} branches")]
    BranchBudgetExceeded { limit: usize },
    #[error("shot count must be at least 1")]
    NoShots,
    #[error(transparent)]
    Invalid(#[from] ValidationError),
}

/// Renders classical bits with the highest index leftmost.
pub fn render_bits(bits: &[bool]) -> String {
    bits.iter()
        .rev()
        .map(|&b| if b { '1' } else { '0' })
        .collect()
}

/// Exact outcome probabilities keyed by classical bitstring.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct OutcomeDistribution {
    entries: BTreeMap<String, f64>,
}

impl OutcomeDistribution {
    pub fn from_entries(entries: impl IntoIterator<Item = (String, f64)>) -> Self {
        let mut out = Self::default();
        for (k, p) in entries {
            out.add(k, p);
        }
        out
    }

    pub(crate) fn add(&mut self, key: String, p: f64) {
        *self.entries.entry(key).or_insert(0.0) += p;
    }

    pub fn get(&self, key: &str) -> f64 {
        self.entries.get(key).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.entries.iter().map(|(k, p)| (k.as_str(), *p))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.entries.values().sum()
    }

    /// Largest absolute probability difference over the union of supports.
    pub fn linf_distance(&self, other: &OutcomeDistribution) -> f64 {
        self.entries
            .keys()
            .chain(other.entries.keys())
            .map(|k| (self.get(k) - other.get(k)).abs())
            .fold(0.0, f64::max)
    }
}

/// Sampled outcome counts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Histogram {
    counts: BTreeMap<String, u64>,
    shots: u64,
}

impl Histogram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, key: String) {
        *self.counts.entry(key).or_insert(0) += 1;
        self.shots += 1;
    }

    pub fn from_counts(counts: impl IntoIterator<Item = (String, u64)>) -> Self {
        let mut out = Self::default();
        for (k, n) in counts {
            *out.counts.entry(k).or_insert(0) += n;
            out.shots += n;
        }
        out
    }

    /// Associative, commutative merge.
    pub fn merge(mut self, other: Histogram) -> Histogram {
        for (k, n) in other.counts {
            *self.counts.entry(k).or_insert(0) += n;
        }
        self.shots += other.shots;
        self
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn get(&self, key: &str) -> u64 {
        self.counts.get(key).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.counts.iter().map(|(k, n)| (k.as_str(), *n))
    }

    pub fn frequencies(&self) -> OutcomeDistribution {
        let total = self.shots.max(1) as f64;
        OutcomeDistribution::from_entries(
            self.counts
                .iter()
                .map(|(k, n)| (k.clone(), *n as f64 / total)),
        )
    }
}
