//! Benchmark circuit families and their analytic oracles.

mod adder;
mod code513;
mod identity;
mod singlet;
mod surface;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{Circuit, CircuitError};
use crate::sim::CountsTable;
use crate::transpile::TranspileError;

pub use adder::{adder_oracle, gen_adder, AdderInput, RegisterSpread, ADDER_DISPLAY_COLUMNS};
pub use code513::{code513_amplitudes, code513_highlevel, gen_513_encoder};
pub use identity::{gen_identity_sequence, identity_table_rows, CxBlock, IdentitySpec};
pub use singlet::{
    correlators_from_probs, gen_singlet, singlet_correlators, singlet_probability, CorrelatorSet, SingletParams,
};
pub use surface::{
    gen_single_qubit_reference, gen_surface_code_case, postselect, surface_code_table, surface_encoder, PostSelection,
    SurfaceVariant, LOGICAL_X_MASK,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BenchError {
    #[error("{0}")]
    InvalidParameter(String),
    #[error("CX block {block} has odd power {power}")]
    OddPower { block: usize, power: usize },
    #[error("CX sequence does not compose to the identity permutation")]
    NotIdentity,
    #[error("no shot survived postselection")]
    Inconclusive,
    #[error("counts have width {found}, expected {expected}")]
    Width { found: usize, expected: usize },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Transpile(#[from] TranspileError),
}

/// Expected outcome distribution over measured bitstrings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Oracle {
    pub expected: BTreeMap<String, f64>,
}

impl Oracle {
    pub fn point(bitstring: impl Into<String>) -> Self {
        Oracle {
            expected: BTreeMap::from([(bitstring.into(), 1.0)]),
        }
    }

    /// Equal weight on each listed string; repeats accumulate.
    pub fn uniform<S: AsRef<str>>(strings: &[S]) -> Self {
        let w = 1.0 / strings.len() as f64;
        let mut expected = BTreeMap::new();
        for s in strings {
            *expected.entry(s.as_ref().to_string()).or_insert(0.0) += w;
        }
        Oracle { expected }
    }

    /// Drops entries below `floor`.
    pub fn from_probs(probs: impl IntoIterator<Item = (String, f64)>, floor: f64) -> Self {
        Oracle {
            expected: probs.into_iter().filter(|(_, p)| *p > floor).collect(),
        }
    }

    pub fn total(&self) -> f64 {
        self.expected.values().sum()
    }

    pub fn prob(&self, s: &str) -> f64 {
        self.expected.get(s).copied().unwrap_or(0.0)
    }

    pub fn is_point(&self) -> bool {
        self.expected.len() == 1
    }

    pub fn width(&self) -> usize {
        self.expected.keys().next().map_or(0, String::len)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

/// Codeword bitstrings of a logical qubit, optionally with amplitudes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodewordTable {
    pub logical0: Vec<(String, f64)>,
    pub logical1: Vec<(String, f64)>,
}

impl CodewordTable {
    pub fn width(&self) -> usize {
        self.logical0.first().map_or(0, |(s, _)| s.len())
    }

    pub fn contains0(&self, s: &str) -> bool {
        self.logical0.iter().any(|(k, _)| k == s)
    }

    pub fn contains1(&self, s: &str) -> bool {
        self.logical1.iter().any(|(k, _)| k == s)
    }
}

/// A generated circuit with everything needed to judge its output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkCase {
    pub name: String,
    pub suite: String,
    #[serde(skip)]
    pub circuit: Circuit,
    pub oracle: Oracle,
    /// Classical bit shown in each display column, left to right.
    pub display_columns: Vec<usize>,
    pub params: serde_json::Value,
    /// Codewords to postselect on before judging, when the case is encoded.
    pub postselect: Option<CodewordTable>,
}

impl BenchmarkCase {
    /// Display columns in the default descending order.
    pub fn default_columns(width: usize) -> Vec<usize> {
        (0..width).rev().collect()
    }

    /// Rewrites a bitstring (bit 0 rightmost) in this case's column order.
    pub fn display(&self, bitstring: &str) -> String {
        let w = bitstring.len();
        let bits: Vec<char> = bitstring.chars().collect();
        self.display_columns
            .iter()
            .map(|&c| if c < w { bits[w - 1 - c] } else { '?' })
            .collect()
    }

    /// Inverse of [`BenchmarkCase::display`].
    pub fn from_display(&self, shown: &str) -> String {
        let w = self.display_columns.len();
        let mut bits = vec!['0'; w];
        for (col, ch) in self.display_columns.iter().zip(shown.chars()) {
            if *col < w {
                bits[w - 1 - col] = ch;
            }
        }
        bits.into_iter().collect()
    }
}

pub(crate) fn width_check(counts: &CountsTable, expected: usize) -> Result<(), BenchError> {
    if counts.width() != expected {
        return Err(BenchError::Width {
            found: counts.width(),
            expected,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_permutation() {
        let case = BenchmarkCase {
            name: "t".into(),
            suite: "t".into(),
            circuit: Circuit::new(4, 4),
            oracle: Oracle::point("0000"),
            display_columns: vec![3, 2, 0, 1],
            params: serde_json::Value::Null,
            postselect: None,
        };
        // c3 c2 c1 c0 = 1 0 1 1 shows as c3 c2 c0 c1 = 1 0 1 1
        assert_eq!(case.display("1011"), "1011");
        assert_eq!(case.display("1001"), "1010");
        assert_eq!(case.from_display("1010"), "1001");
    }

    #[test]
    fn oracle_constructors() {
        assert_eq!(Oracle::point("01").total(), 1.0);
        let u = Oracle::uniform(&["00", "11", "00"]);
        assert!((u.prob("00") - 2.0 / 3.0).abs() < 1e-15);
        assert!(u.to_json().contains("\"expected\""));
    }
}
