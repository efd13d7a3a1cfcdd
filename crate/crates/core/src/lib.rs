//! Benchmark circuits for small gate-based quantum processors, an exact and
//! noisy state-vector simulator, a coupling-map router, and the statistics
//! used to turn measurement counts into verdicts.
//!
//! Bitstrings everywhere put classical bit 0 in the rightmost character.

pub mod analysis;
pub mod bench;
pub mod circuit;
pub mod qasm;
pub mod sim;
pub mod transpile;

pub use circuit::{
    estimate_duration, validate_coupling, Circuit, CircuitError, CodeSpec, CouplingMap, Device,
    DeviceProfile, Gate,
};
