//! Quantum Galton board toolkit.
//!
//! * [`builder`] generates peg, unbiased, uniformly biased and per-peg biased
//!   board circuits and evaluates their closed-form gate budgets.
//! * [`sim`] runs circuits on a dense statevector, either shot by shot or as
//!   an exact branch-enumerated distribution.
//! * [`qasm`] reads and writes the OpenQASM 2.0 subset the boards use.
//! * [`stats`] decodes one-hot outcomes and compares them with binomial and
//!   normal references.
//! * [`analysis`] and [`decompose`] count, layer and rewrite circuits.

pub mod analysis;
pub mod angle;
pub mod builder;
pub mod circuit;
pub mod decompose;
pub mod qasm;
pub mod sim;
pub mod stats;

pub use analysis::{depth, gate_count, GateCounts};
pub use angle::{AngleError, AngleValue, PiFraction};
pub use builder::{
    build_biased_peg, build_biased_qgb, build_fine_grained_qgb, build_peg, build_qgb, gate_bound,
    Bias, BoundVariant, BuildError, PegBias, QgbSpec,
};
pub use circuit::{Circuit, GateKind, GateOp, ValidationError, Violation};
pub use decompose::decompose_cswap;
pub use sim::{
    exact_distribution, run_shot, run_shots, Histogram, OutcomeDistribution, ShotResult, SimError,
    StateVector,
};
pub use stats::{
    binomial_reference, decode_one_hot, normal_reference, rescale_blocks, summary_stats,
    DecodedSamples, ReferenceDistribution, SummaryStats,
};
