//! Two-bit modular adder built on the quantum Fourier transform.
//!
//! Register `a` lives on qubits 0 (low bit) and 1 (high bit). Register `b`
//! lives on qubits 2 (low) and 3 (high) and is overwritten with
//! `(a + b) mod 4`. Qubit `i` is measured into classical bit `i`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{BenchError, BenchmarkCase, Oracle};
use crate::circuit::{Circuit, Gate};
use crate::sim::format_bits;

/// Display order `|Q3 Q2 Q0 Q1>` used when printing adder results.
pub const ADDER_DISPLAY_COLUMNS: [usize; 4] = [3, 2, 0, 1];

/// How one input register is prepared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegisterSpread {
    /// The basis state of the given value.
    #[default]
    None,
    /// Low bit in equal superposition; high bit from the value.
    Low,
    /// High bit in equal superposition; low bit from the value.
    High,
    /// All four values.
    Both,
    /// H on the low bit then CX low to high: values `2h` and `2(1-h)+1`
    /// where `h` is the value's high bit.
    Mirror,
}

impl RegisterSpread {
    /// Values the register takes, each with equal weight.
    pub fn values(self, value: usize) -> Vec<usize> {
        let (lo, hi) = (value & 1, value >> 1 & 1);
        match self {
            RegisterSpread::None => vec![value],
            RegisterSpread::Low => vec![2 * hi, 2 * hi + 1],
            RegisterSpread::High => vec![lo, lo + 2],
            RegisterSpread::Both => vec![0, 1, 2, 3],
            RegisterSpread::Mirror => vec![2 * hi, 2 * (1 - hi) + 1],
        }
    }

    fn prepare(self, c: &mut Circuit, value: usize, lo_q: usize, hi_q: usize) -> Result<(), BenchError> {
        let (lo, hi) = (value & 1 == 1, value >> 1 & 1 == 1);
        let mut gates = Vec::new();
        match self {
            RegisterSpread::None => {
                if lo {
                    gates.push(Gate::X(lo_q));
                }
                if hi {
                    gates.push(Gate::X(hi_q));
                }
            }
            RegisterSpread::Low => {
                gates.push(Gate::H(lo_q));
                if hi {
                    gates.push(Gate::X(hi_q));
                }
            }
            RegisterSpread::High => {
                if lo {
                    gates.push(Gate::X(lo_q));
                }
                gates.push(Gate::H(hi_q));
            }
            RegisterSpread::Both => gates.extend([Gate::H(lo_q), Gate::H(hi_q)]),
            RegisterSpread::Mirror => {
                if hi {
                    gates.push(Gate::X(hi_q));
                }
                gates.extend([Gate::H(lo_q), Gate::cx(lo_q, hi_q)]);
            }
        }
        c.extend(gates)?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct AdderInput {
    pub a: usize,
    pub b: usize,
    pub spread_a: RegisterSpread,
    pub spread_b: RegisterSpread,
}

impl AdderInput {
    pub fn basis(a: usize, b: usize) -> Self {
        AdderInput {
            a,
            b,
            ..Default::default()
        }
    }
}

pub fn adder_oracle(a: usize, b: usize) -> usize {
    (a + b) % 4
}

/// Controlled phase `diag(1,1,1,e^{iλ})` from CX and U1 gates.
fn cu1(lambda: f64, control: usize, target: usize) -> [Gate; 5] {
    [
        Gate::u1(control, lambda / 2.0),
        Gate::u1(target, lambda / 2.0),
        Gate::cx(control, target),
        Gate::u1(target, -lambda / 2.0),
        Gate::cx(control, target),
    ]
}

pub fn gen_adder(input: AdderInput) -> Result<BenchmarkCase, BenchError> {
    let AdderInput { a, b, spread_a, spread_b } = input;
    if a > 3 || b > 3 {
        return Err(BenchError::InvalidParameter(format!("adder inputs must be in 0..=3, got {a} and {b}")));
    }
    let name = match (spread_a, spread_b) {
        (RegisterSpread::None, RegisterSpread::None) => format!("adder-{a}+{b}"),
        _ => format!(
            "adder-{a}+{b}-{}-{}",
            serde_json::to_value(spread_a).expect("enum").as_str().unwrap_or("x"),
            serde_json::to_value(spread_b).expect("enum").as_str().unwrap_or("x"),
        ),
    };
    let mut c = Circuit::named(&name, 4, 4);
    spread_a.prepare(&mut c, a, 0, 1)?;
    spread_b.prepare(&mut c, b, 2, 3)?;

    // Fourier transform of the sum register, high bit first, no final swap.
    c.append(Gate::H(3))?;
    c.extend(cu1(PI / 2.0, 2, 3))?;
    c.append(Gate::H(2))?;
    // Phase additions: qubit 3 gains 2πa/4, qubit 2 gains 2πa/2.
    c.extend(cu1(PI / 2.0, 0, 3))?;
    c.extend(cu1(PI, 1, 3))?;
    c.extend(cu1(PI, 0, 2))?;
    // Inverse transform.
    c.append(Gate::H(2))?;
    c.extend(cu1(-PI / 2.0, 2, 3))?;
    c.append(Gate::H(3))?;
    c.measure_all()?;

    let mut outcomes = Vec::new();
    for av in spread_a.values(a) {
        for bv in spread_b.values(b) {
            outcomes.push(format_bits(adder_oracle(av, bv) << 2 | av, 4));
        }
    }
    Ok(BenchmarkCase {
        name,
        suite: "adder".into(),
        circuit: c,
        oracle: Oracle::uniform(&outcomes),
        display_columns: ADDER_DISPLAY_COLUMNS.to_vec(),
        params: serde_json::to_value(input).expect("plain data"),
        postselect: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::run_exact;

    #[test]
    fn oracle_examples() {
        assert_eq!(adder_oracle(2, 3), 1);
        assert_eq!(adder_oracle(0, 0), 0);
        assert_eq!(adder_oracle(1, 3), 0);
    }

    #[test]
    fn one_plus_three_is_zero() {
        let case = gen_adder(AdderInput::basis(1, 3)).unwrap();
        let d = run_exact(&case.circuit).unwrap();
        // sum 00 on c3 c2, a = 01 on c1 c0
        assert!((d.prob_of("0001") - 1.0).abs() < 1e-10);
        assert_eq!(case.display("0001"), "0010");
    }

    #[test]
    fn zero_plus_zero_all_zero() {
        let d = run_exact(&gen_adder(AdderInput::basis(0, 0)).unwrap().circuit).unwrap();
        assert!((d.prob_of("0000") - 1.0).abs() < 1e-10);
    }

    #[test]
    fn exhaustive_pairs() {
        for a in 0..4 {
            for b in 0..4 {
                let case = gen_adder(AdderInput::basis(a, b)).unwrap();
                let d = run_exact(&case.circuit).unwrap();
                let want = format_bits(adder_oracle(a, b) << 2 | a, 4);
                assert!((d.prob_of(&want) - 1.0).abs() < 1e-10, "{a}+{b}");
            }
        }
    }

    #[test]
    fn superposed_low_bit_of_a() {
        let input = AdderInput {
            a: 0,
            b: 0,
            spread_a: RegisterSpread::Low,
            spread_b: RegisterSpread::None,
        };
        let case = gen_adder(input).unwrap();
        let d = run_exact(&case.circuit).unwrap();
        assert!((d.prob_of("0000") - 0.5).abs() < 1e-10);
        assert!((d.prob_of("0101") - 0.5).abs() < 1e-10);
    }

    #[test]
    fn spreads_cover_expected_values() {
        assert_eq!(RegisterSpread::Mirror.values(0), vec![0, 3]);
        assert_eq!(RegisterSpread::Mirror.values(2), vec![2, 1]);
        assert_eq!(RegisterSpread::High.values(1), vec![1, 3]);
        assert!(gen_adder(AdderInput::basis(4, 0)).is_err());
    }
}
