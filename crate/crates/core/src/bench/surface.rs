//! Distance-two five-qubit surface code with postselection.
//!
//! Codeword strings are written `q4 q3 q2 q1 q0`; the data qubit is q2.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{width_check, BenchError, BenchmarkCase, CodewordTable, Oracle};
use crate::circuit::{Circuit, Gate};
use crate::sim::CountsTable;

const LOGICAL0: [&str; 4] = ["00000", "01111", "10110", "11001"];
const LOGICAL1: [&str; 4] = ["00011", "01100", "10101", "11010"];

/// Qubits flipped by the logical X operator (q1 and q0).
pub const LOGICAL_X_MASK: usize = 0b00011;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SurfaceVariant {
    /// `H T^K H` on the data qubit before encoding.
    PreEncodeT,
    /// Encode `|0>`, then apply logical X `K` times.
    LogicalX,
}

pub fn surface_code_table() -> CodewordTable {
    let entry = |s: &&str| (s.to_string(), 0.5);
    CodewordTable {
        logical0: LOGICAL0.iter().map(entry).collect(),
        logical1: LOGICAL1.iter().map(entry).collect(),
    }
}

/// Encoder taking the state of q2 (others `|0>`) to the logical state.
pub fn surface_encoder() -> Vec<Gate> {
    vec![
        Gate::cx(2, 1),
        Gate::cx(2, 0),
        Gate::cx(1, 2),
        Gate::H(4),
        Gate::H(3),
        Gate::cx(4, 2),
        Gate::cx(3, 2),
        Gate::cx(4, 1),
        Gate::cx(3, 1),
        Gate::cx(3, 0),
    ]
}

fn logical_x() -> Vec<Gate> {
    (0..5).filter(|q| LOGICAL_X_MASK >> q & 1 == 1).map(Gate::X).collect()
}

fn check_k(k: usize) -> Result<(), BenchError> {
    if k > 8 {
        return Err(BenchError::InvalidParameter(format!("K must be in 0..=8, got {k}")));
    }
    Ok(())
}

/// `(P(logical 0), P(logical 1))` predicted for the variant.
fn logical_probs(k: usize, variant: SurfaceVariant) -> (f64, f64) {
    match variant {
        SurfaceVariant::PreEncodeT => {
            let c = (PI * k as f64 / 8.0).cos().powi(2);
            (c, 1.0 - c)
        }
        SurfaceVariant::LogicalX if k % 2 == 0 => (1.0, 0.0),
        SurfaceVariant::LogicalX => (0.0, 1.0),
    }
}

fn variant_name(v: SurfaceVariant) -> &'static str {
    match v {
        SurfaceVariant::PreEncodeT => "pre-encode-t",
        SurfaceVariant::LogicalX => "logical-x",
    }
}

pub fn gen_surface_code_case(k: usize, variant: SurfaceVariant) -> Result<BenchmarkCase, BenchError> {
    check_k(k)?;
    let name = format!("surface-{}-k{k}", variant_name(variant));
    let mut c = Circuit::named(&name, 5, 5);
    if variant == SurfaceVariant::PreEncodeT {
        c.append(Gate::H(2))?;
        c.extend((0..k).map(|_| Gate::T(2)))?;
        c.append(Gate::H(2))?;
    }
    c.extend(surface_encoder())?;
    if variant == SurfaceVariant::LogicalX {
        for _ in 0..k {
            c.extend(logical_x())?;
        }
    }
    c.measure_all()?;

    let (p0, p1) = logical_probs(k, variant);
    let expected = LOGICAL0
        .iter()
        .map(|s| (s.to_string(), p0 / 4.0))
        .chain(LOGICAL1.iter().map(|s| (s.to_string(), p1 / 4.0)));
    Ok(BenchmarkCase {
        name,
        suite: "surface".into(),
        circuit: c,
        oracle: Oracle::from_probs(expected, 1e-15),
        display_columns: BenchmarkCase::default_columns(5),
        params: serde_json::json!({ "K": k, "variant": variant, "p_logical0": p0 }),
        postselect: Some(surface_code_table()),
    })
}

/// The same rotation on one unencoded qubit.
pub fn gen_single_qubit_reference(k: usize, variant: SurfaceVariant) -> Result<BenchmarkCase, BenchError> {
    check_k(k)?;
    let name = format!("single-{}-k{k}", variant_name(variant));
    let mut c = Circuit::named(&name, 1, 1);
    match variant {
        SurfaceVariant::PreEncodeT => {
            c.append(Gate::H(0))?;
            c.extend((0..k).map(|_| Gate::T(0)))?;
            c.append(Gate::H(0))?;
        }
        SurfaceVariant::LogicalX => {
            c.extend((0..k).map(|_| Gate::X(0)))?;
        }
    }
    c.append(Gate::measure(0, 0))?;
    let (p0, p1) = logical_probs(k, variant);
    Ok(BenchmarkCase {
        name,
        suite: "surface".into(),
        circuit: c,
        oracle: Oracle::from_probs([("0".to_string(), p0), ("1".to_string(), p1)], 1e-15),
        display_columns: vec![0],
        params: serde_json::json!({ "K": k, "variant": variant, "p_logical0": p0 }),
        postselect: None,
    })
}

/// Frequencies of the logical states among shots that landed in the codespace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PostSelection {
    pub f_logical0: f64,
    pub f_logical1: f64,
    pub retained: u64,
    pub retained_fraction: f64,
}

pub fn postselect(counts: &CountsTable, table: &CodewordTable) -> Result<PostSelection, BenchError> {
    width_check(counts, table.width())?;
    let (mut n0, mut n1) = (0u64, 0u64);
    for (k, &v) in &counts.counts {
        if table.contains0(k) {
            n0 += v;
        } else if table.contains1(k) {
            n1 += v;
        }
    }
    let retained = n0 + n1;
    if retained == 0 {
        return Err(BenchError::Inconclusive);
    }
    Ok(PostSelection {
        f_logical0: n0 as f64 / retained as f64,
        f_logical1: n1 as f64 / retained as f64,
        retained,
        retained_fraction: retained as f64 / counts.shots as f64,
    })
}
