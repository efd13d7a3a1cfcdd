//! Two-spin singlet correlations measured along rotated axes.
//!
//! Circuit qubit 0 carries spin 1 and qubit 1 carries spin 2. Each spin is
//! measured along `(0, -sin θ, cos θ)`, realised as `H · U1(-θ) · H`
//! before a computational-basis measurement.

use serde::{Deserialize, Serialize};

use super::{width_check, BenchError, BenchmarkCase, Oracle};
use crate::circuit::{Circuit, Gate};
use crate::sim::CountsTable;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingletParams {
    pub theta1: f64,
    pub theta2: f64,
}

/// Frequency-based correlators and their singlet predictions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelatorSet {
    #[serde(rename = "F1")]
    pub f1: f64,
    #[serde(rename = "F2")]
    pub f2: f64,
    #[serde(rename = "F")]
    pub f: f64,
    /// `f(q1, q2)` indexed as `[f00, f01, f10, f11]`.
    pub freqs: [f64; 4],
}

/// `P(q1, q2) = (1 - S1 S2 cos(θ1 - θ2)) / 4` with `S = 1 - 2q`.
pub fn singlet_probability(q1: u8, q2: u8, theta1: f64, theta2: f64) -> f64 {
    let s1 = 1.0 - 2.0 * q1 as f64;
    let s2 = 1.0 - 2.0 * q2 as f64;
    (1.0 - s1 * s2 * (theta1 - theta2).cos()) / 4.0
}

/// Measured string for spin values `q1` (classical bit 0) and `q2` (bit 1).
fn key(q1: u8, q2: u8) -> String {
    format!("{q2}{q1}")
}

pub fn gen_singlet(params: SingletParams) -> Result<BenchmarkCase, BenchError> {
    let SingletParams { theta1, theta2 } = params;
    if !theta1.is_finite() || !theta2.is_finite() {
        return Err(BenchError::InvalidParameter("singlet angles must be finite".into()));
    }
    let name = format!("singlet-{theta1:.4}-{theta2:.4}");
    let mut c = Circuit::named(&name, 2, 2);
    c.extend([Gate::X(0), Gate::X(1), Gate::H(0), Gate::cx(0, 1)])?;
    for (q, theta) in [(0, theta1), (1, theta2)] {
        c.extend([Gate::H(q), Gate::u1(q, -theta), Gate::H(q)])?;
    }
    c.extend([Gate::measure(0, 0), Gate::measure(1, 1)])?;

    let mut expected = std::collections::BTreeMap::new();
    for q1 in 0..2u8 {
        for q2 in 0..2u8 {
            expected.insert(key(q1, q2), singlet_probability(q1, q2, theta1, theta2));
        }
    }
    Ok(BenchmarkCase {
        name,
        suite: "singlet".into(),
        circuit: c,
        oracle: Oracle { expected },
        display_columns: vec![1, 0],
        params: serde_json::json!({ "theta1": theta1, "theta2": theta2 }),
        postselect: None,
    })
}

/// `F1 = f00 + f01 - f10 - f11`, `F2 = f00 - f01 + f10 - f11`,
/// `F = f00 - f01 - f10 + f11`, with `f(q1, q2)` relative frequencies.
pub fn singlet_correlators(counts: &CountsTable) -> Result<CorrelatorSet, BenchError> {
    counts.validate().map_err(|e| BenchError::InvalidParameter(e.to_string()))?;
    width_check(counts, 2)?;
    let n = counts.shots as f64;
    let f = |q1: u8, q2: u8| counts.count(&key(q1, q2)) as f64 / n;
    let (f00, f01, f10, f11) = (f(0, 0), f(0, 1), f(1, 0), f(1, 1));
    Ok(CorrelatorSet {
        f1: f00 + f01 - f10 - f11,
        f2: f00 - f01 + f10 - f11,
        f: f00 - f01 - f10 + f11,
        freqs: [f00, f01, f10, f11],
    })
}

/// Exact correlators from a probability table keyed like measured strings.
pub fn correlators_from_probs(p: impl Fn(&str) -> f64) -> (f64, f64, f64) {
    let f = |q1: u8, q2: u8| p(&key(q1, q2));
    let (f00, f01, f10, f11) = (f(0, 0), f(0, 1), f(1, 0), f(1, 1));
    (f00 + f01 - f10 - f11, f00 - f01 + f10 - f11, f00 - f01 - f10 + f11)
}
