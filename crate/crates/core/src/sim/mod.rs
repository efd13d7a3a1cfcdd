//! State-vector simulation.
//!
//! Amplitude index bit `k` is qubit `k`. Gates are applied in place by
//! walking amplitude pairs `(i, i | 1<<q)` exactly once; large registers
//! split that walk across rayon workers.

mod counts;
mod matrix;
mod sampling;

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::circuit::{Circuit, Gate};

pub use counts::{CountsError, CountsTable, UNDATED};
pub use matrix::Matrix;
pub use sampling::{run_noisy, sample, Channel, NoiseModel};

/// Registers below this size are processed on the calling thread.
const PARALLEL_MIN_QUBITS: usize = 14;
/// Stride from which the pair walk parallelises inside one block instead of across blocks.
const INNER_PARALLEL_STRIDE: usize = 1 << 12;

/// Largest register `unitary_of` will build.
pub const MAX_UNITARY_QUBITS: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("qubit index {index} out of range for {size}-qubit state")]
    QubitOutOfRange { index: usize, size: usize },
    #[error("circuit has no measurement")]
    NoMeasurement,
    #[error("circuit contains a measurement")]
    MeasurementPresent,
    #[error("{0} qubits exceed the limit of {MAX_UNITARY_QUBITS}")]
    TooManyQubits(usize),
    #[error("measure and barrier are not unitary gates")]
    NotUnitary,
    #[error("shot count must be at least 1")]
    NoShots,
    #[error("invalid noise model: {0}")]
    BadNoise(String),
}

type C = Complex64;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// 2x2 matrix `[[a, b], [c, d]]` of a single-qubit gate.
pub fn gate_matrix(gate: &Gate) -> Option<[[C; 2]; 2]> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let (o, l) = (c(0.0, 0.0), c(1.0, 0.0));
    Some(match gate {
        Gate::X(_) => [[o, l], [l, o]],
        Gate::Y(_) => [[o, c(0.0, -1.0)], [c(0.0, 1.0), o]],
        Gate::H(_) => [[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]],
        g => {
            let phi = g.phase_angle()?;
            [[l, o], [o, C::from_polar(1.0, phi)]]
        }
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<C>,
}

/// Calls `f(lo_index, lo, hi)` once for every pair of amplitudes that differ
/// only in bit `q`, where `lo` has the bit clear.
fn for_each_pair<F>(amps: &mut [C], q: usize, parallel: bool, f: F)
where
    F: Fn(usize, &mut C, &mut C) + Sync,
{
    let stride = 1usize << q;
    let block = stride << 1;
    let run_block = |b: usize, chunk: &mut [C]| {
        let (lo, hi) = chunk.split_at_mut(stride);
        let base = b * block;
        for (k, (x, y)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
            f(base + k, x, y);
        }
    };
    if !parallel {
        amps.chunks_mut(block).enumerate().for_each(|(b, ch)| run_block(b, ch));
    } else if stride < INNER_PARALLEL_STRIDE {
        amps.par_chunks_mut(block)
            .with_min_len((INNER_PARALLEL_STRIDE / block).max(1))
            .enumerate()
            .for_each(|(b, ch)| run_block(b, ch));
    } else {
        for (b, chunk) in amps.chunks_mut(block).enumerate() {
            let (lo, hi) = chunk.split_at_mut(stride);
            let base = b * block;
            lo.par_iter_mut()
                .zip(hi.par_iter_mut())
                .enumerate()
                .with_min_len(1024)
                .for_each(|(k, (x, y))| f(base + k, x, y));
        }
    }
}

impl StateVector {
    /// `|0...0>` on `num_qubits` qubits.
    pub fn zero(num_qubits: usize) -> Self {
        let mut amps = vec![c(0.0, 0.0); 1usize << num_qubits];
        amps[0] = c(1.0, 0.0);
        StateVector { num_qubits, amps }
    }

    /// Computational basis state with the given index.
    pub fn basis(num_qubits: usize, index: usize) -> Self {
        let mut s = StateVector::zero(num_qubits);
        s.amps[0] = c(0.0, 0.0);
        s.amps[index] = c(1.0, 0.0);
        s
    }

    /// Wraps raw amplitudes; the length must be a power of two.
    pub fn from_amplitudes(amps: Vec<C>) -> Option<Self> {
        let len = amps.len();
        (len.is_power_of_two()).then(|| StateVector {
            num_qubits: len.trailing_zeros() as usize,
            amps,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[C] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> C {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &StateVector) -> C {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    fn parallel(&self) -> bool {
        self.num_qubits >= PARALLEL_MIN_QUBITS
    }

    fn check(&self, q: usize) -> Result<(), SimError> {
        if q >= self.num_qubits {
            return Err(SimError::QubitOutOfRange {
                index: q,
                size: self.num_qubits,
            });
        }
        Ok(())
    }

    /// Applies an arbitrary 2x2 unitary to qubit `q`.
    pub fn apply_matrix(&mut self, q: usize, m: [[C; 2]; 2]) -> Result<(), SimError> {
        self.check(q)?;
        let par = self.parallel();
        for_each_pair(&mut self.amps, q, par, |_, a, b| {
            let (x, y) = (*a, *b);
            *a = m[0][0] * x + m[0][1] * y;
            *b = m[1][0] * x + m[1][1] * y;
        });
        Ok(())
    }

    fn apply_phase(&mut self, q: usize, phi: f64) {
        let phase = C::from_polar(1.0, phi);
        let par = self.parallel();
        for_each_pair(&mut self.amps, q, par, |_, _, b| *b *= phase);
    }

    fn apply_cx(&mut self, control: usize, target: usize) {
        let cmask = 1usize << control;
        let par = self.parallel();
        for_each_pair(&mut self.amps, target, par, |i, a, b| {
            if i & cmask != 0 {
                std::mem::swap(a, b);
            }
        });
    }

    /// Applies one unitary gate in place.
    pub fn apply(&mut self, gate: &Gate) -> Result<(), SimError> {
        for q in gate.qubits() {
            self.check(q)?;
        }
        match gate {
            Gate::Measure { .. } => Err(SimError::NotUnitary),
            Gate::Barrier(_) => Ok(()),
            Gate::CX { control, target } => {
                self.apply_cx(*control, *target);
                Ok(())
            }
            g => {
                let q = g.qubits()[0];
                match g.phase_angle() {
                    Some(phi) => self.apply_phase(q, phi),
                    None => {
                        let m = gate_matrix(g).expect("single-qubit gate");
                        self.apply_matrix(q, m)?;
                    }
                }
                Ok(())
            }
        }
    }

    /// Born-rule probabilities of every basis index.
    pub fn probabilities(&self) -> Vec<f64> {
        if self.parallel() {
            self.amps.par_iter().map(|a| a.norm_sqr()).collect()
        } else {
            self.amps.iter().map(|a| a.norm_sqr()).collect()
        }
    }
}

/// Functional form of [`StateVector::apply`].
pub fn apply_gate(mut state: StateVector, gate: &Gate) -> Result<StateVector, SimError> {
    state.apply(gate)?;
    Ok(state)
}

/// Runs every unitary gate of `circuit` on `|0...0>`, skipping measurements.
pub fn final_state(circuit: &Circuit) -> StateVector {
    let mut s = StateVector::zero(circuit.num_qubits());
    for g in circuit.gates().iter().filter(|g| g.is_unitary()) {
        s.apply(g).expect("circuit indices are validated on construction");
    }
    s
}

/// Outcome distribution over classical registers, indexed by the integer
/// whose bit `c` is classical bit `c`.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    width: usize,
    probs: Vec<f64>,
}

impl Distribution {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob_of(&self, bitstring: &str) -> f64 {
        parse_bits(bitstring, self.width).map_or(0.0, |i| self.probs[i])
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Outcomes with probability above `floor`, as bitstrings.
    pub fn support(&self, floor: f64) -> Vec<(String, f64)> {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, p)| **p > floor)
            .map(|(i, p)| (format_bits(i, self.width), *p))
            .collect()
    }

    /// The same distribution keyed by bitstring, dropping numerically zero entries.
    pub fn to_map(&self) -> std::collections::BTreeMap<String, f64> {
        self.support(1e-14).into_iter().collect()
    }
}

/// Bitstring of `value` with bit 0 rightmost.
pub fn format_bits(value: usize, width: usize) -> String {
    (0..width)
        .rev()
        .map(|b| if value >> b & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Inverse of [`format_bits`]; `None` unless `s` has `width` binary digits.
pub fn parse_bits(s: &str, width: usize) -> Option<usize> {
    if s.len() != width || width >= usize::BITS as usize {
        return None;
    }
    s.chars().try_fold(0usize, |acc, ch| match ch {
        '0' => Some(acc << 1),
        '1' => Some(acc << 1 | 1),
        _ => None,
    })
}

/// Folds basis-index probabilities onto classical registers. Later
/// measurements into the same classical bit overwrite earlier ones.
fn marginalize(probs: &[f64], measurements: &[(usize, usize)], width: usize) -> Vec<f64> {
    let mut out = vec![0.0; 1usize << width];
    let mut map: Vec<(usize, usize)> = Vec::new();
    for &(q, cbit) in measurements {
        map.retain(|&(_, cb)| cb != cbit);
        map.push((q, cbit));
    }
    for (i, p) in probs.iter().enumerate() {
        if *p == 0.0 {
            continue;
        }
        let key = map.iter().fold(0usize, |acc, &(q, cbit)| acc | ((i >> q & 1) << cbit));
        out[key] += p;
    }
    out
}

/// Exact outcome probabilities of a measure-last circuit.
pub fn run_exact(circuit: &Circuit) -> Result<Distribution, SimError> {
    let meas = circuit.measurements();
    if meas.is_empty() {
        return Err(SimError::NoMeasurement);
    }
    let state = final_state(circuit);
    Ok(distribution_of(&state, &meas, circuit.num_clbits()))
}

pub(crate) fn distribution_of(state: &StateVector, meas: &[(usize, usize)], width: usize) -> Distribution {
    Distribution {
        width,
        probs: marginalize(&state.probabilities(), meas, width),
    }
}

/// Unitary matrix of a measurement-free circuit on at most ten qubits.
pub fn unitary_of(circuit: &Circuit) -> Result<Matrix, SimError> {
    let n = circuit.num_qubits();
    if n > MAX_UNITARY_QUBITS {
        return Err(SimError::TooManyQubits(n));
    }
    if circuit.has_measurements() {
        return Err(SimError::MeasurementPresent);
    }
    let dim = 1usize << n;
    let cols: Vec<Vec<C>> = (0..dim)
        .into_par_iter()
        .map(|j| {
            let mut s = StateVector::basis(n, j);
            for g in circuit.gates() {
                s.apply(g).expect("validated circuit");
            }
            s.amps
        })
        .collect();
    let mut u = Matrix::zeros(dim);
    for (j, col) in cols.iter().enumerate() {
        u.set_column(j, col);
    }
    Ok(u)
}
