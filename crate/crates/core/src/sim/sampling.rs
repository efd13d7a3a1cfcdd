//! Shot sampling with per-shot random streams.
//!
//! Shot `s` under seed `x` always draws from ChaCha8 seeded with `x` on
//! stream `s`, so results do not depend on how shots are spread over
//! threads. Noise draws use a disjoint stream family of the same seed.

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{distribution_of, final_state, format_bits, CountsTable, Distribution, SimError, StateVector};
use crate::circuit::{Circuit, Gate};

const NOISE_STREAM_BIT: u64 = 1 << 63;

fn shot_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Cumulative distribution used to turn a uniform draw into an outcome.
struct Cdf(Vec<f64>);

impl Cdf {
    fn new(d: &Distribution) -> Self {
        let mut acc = 0.0;
        let mut cdf: Vec<f64> = d
            .probs()
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        // Rounding can leave the total a hair below 1; stretch it so every
        // draw in [0, 1) lands on an outcome with nonzero probability.
        if let Some(&total) = cdf.last() {
            for v in cdf.iter_mut() {
                *v /= total;
            }
        }
        Cdf(cdf)
    }

    fn draw(&self, u: f64) -> usize {
        self.0.partition_point(|&c| c <= u).min(self.0.len() - 1)
    }
}

fn tally(outcomes: &[usize], width: usize) -> BTreeMap<String, u64> {
    let mut counts = BTreeMap::new();
    for &o in outcomes {
        *counts.entry(format_bits(o, width)).or_insert(0) += 1;
    }
    counts
}

fn table(circuit: &Circuit, backend: &str, seed: u64, counts: BTreeMap<String, u64>) -> CountsTable {
    CountsTable::new(backend, circuit.name(), Some(seed), counts).expect("sampled counts are well formed")
}

/// Draws `shots` outcomes from the exact distribution of `circuit`.
pub fn sample(circuit: &Circuit, shots: u64, seed: u64) -> Result<CountsTable, SimError> {
    if shots == 0 {
        return Err(SimError::NoShots);
    }
    let dist = super::run_exact(circuit)?;
    let cdf = Cdf::new(&dist);
    let outcomes: Vec<usize> = (0..shots)
        .into_par_iter()
        .map(|s| cdf.draw(shot_rng(seed, s).random::<f64>()))
        .collect();
    Ok(table(circuit, "ideal", seed, tally(&outcomes, dist.width())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    /// X on the faulty qubit.
    #[default]
    BitFlip,
    /// X, Y or Z, each with probability 1/3.
    Depolarizing,
}

impl std::str::FromStr for Channel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "bitflip" | "bit_flip" => Ok(Channel::BitFlip),
            "depolarizing" => Ok(Channel::Depolarizing),
            other => Err(format!("unknown noise channel `{other}`")),
        }
    }
}

/// Independent per-gate, per-qubit error with probability `1 - p_correct`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub p_correct: f64,
    pub channel: Channel,
}

impl NoiseModel {
    pub fn new(p_correct: f64, channel: Channel) -> Result<Self, SimError> {
        if !(p_correct > 0.0 && p_correct <= 1.0) {
            return Err(SimError::BadNoise(format!("p_correct must lie in (0, 1], got {p_correct}")));
        }
        Ok(NoiseModel { p_correct, channel })
    }
}

/// One injected error: after gate `gate_index`, Pauli `pauli` (0=X, 1=Y, 2=Z) on `qubit`.
type Fault = (u32, u32, u8);

fn draw_faults(circuit: &Circuit, noise: &NoiseModel, rng: &mut ChaCha8Rng) -> Vec<Fault> {
    let p_err = 1.0 - noise.p_correct;
    let mut faults = Vec::new();
    for (gi, g) in circuit.gates().iter().enumerate() {
        if !g.is_unitary() {
            continue;
        }
        for q in g.qubits() {
            if rng.random::<f64>() < p_err {
                let pauli = match noise.channel {
                    Channel::BitFlip => 0,
                    Channel::Depolarizing => rng.random_range(0..3u8),
                };
                faults.push((gi as u32, q as u32, pauli));
            }
        }
    }
    faults
}

fn faulty_distribution(circuit: &Circuit, faults: &[Fault]) -> Distribution {
    let mut s = StateVector::zero(circuit.num_qubits());
    let mut next = faults.iter().peekable();
    for (gi, g) in circuit.gates().iter().enumerate() {
        if !g.is_unitary() {
            continue;
        }
        s.apply(g).expect("validated circuit");
        while let Some(&&(fg, q, pauli)) = next.peek() {
            if fg as usize != gi {
                break;
            }
            let q = q as usize;
            let err = match pauli {
                0 => Gate::X(q),
                1 => Gate::Y(q),
                _ => Gate::Z(q),
            };
            s.apply(&err).expect("validated circuit");
            next.next();
        }
    }
    distribution_of(&s, &circuit.measurements(), circuit.num_clbits())
}

/// Monte-Carlo sampling under a per-gate error channel.
///
/// Shots with the same fault pattern share one simulated trajectory. With
/// `p_correct = 1` the result equals [`sample`] for the same seed.
pub fn run_noisy(circuit: &Circuit, noise: &NoiseModel, shots: u64, seed: u64) -> Result<CountsTable, SimError> {
    if shots == 0 {
        return Err(SimError::NoShots);
    }
    if !circuit.has_measurements() {
        return Err(SimError::NoMeasurement);
    }
    NoiseModel::new(noise.p_correct, noise.channel)?;

    let patterns: Vec<Vec<Fault>> = (0..shots)
        .into_par_iter()
        .map(|s| draw_faults(circuit, noise, &mut shot_rng(seed, s | NOISE_STREAM_BIT)))
        .collect();

    let mut unique: Vec<&Vec<Fault>> = patterns.iter().collect();
    unique.sort();
    unique.dedup();
    let cdfs: HashMap<&Vec<Fault>, Cdf> = unique
        .par_iter()
        .map(|p| {
            let d = if p.is_empty() {
                distribution_of(&final_state(circuit), &circuit.measurements(), circuit.num_clbits())
            } else {
                faulty_distribution(circuit, p)
            };
            (*p, Cdf::new(&d))
        })
        .collect();

    let outcomes: Vec<usize> = patterns
        .par_iter()
        .enumerate()
        .map(|(s, p)| cdfs[p].draw(shot_rng(seed, s as u64).random::<f64>()))
        .collect();
    let backend = format!("noisy-{:?}-{}", noise.channel, noise.p_correct).to_lowercase();
    Ok(table(circuit, &backend, seed, tally(&outcomes, circuit.num_clbits())))
}
