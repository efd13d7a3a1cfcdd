//! Encoder for the perfect five-qubit code on the star-shaped device.
//!
//! The encoder is a controlled-stabiliser construction: each of the pivot
//! qubits 0, 1, 3, 4 is put in `|+>` (or `|+i>`) and then controls its
//! stabiliser generator onto the remaining qubits. Controlled-Z and
//! controlled-Y steps are rewritten into CNOTs with the verified rules and
//! the result is routed onto `ibmqe-v1` with the layout restored.

use super::{BenchError, BenchmarkCase, CodewordTable, Oracle};
use crate::circuit::{Circuit, CouplingMap, Gate};
use crate::sim::format_bits;
use crate::transpile::{route_with, rule, RouteOptions};

/// Signed amplitude table of `|value>_L` over strings `q4 .. q0`.
///
/// Codewords of `|0>_L` have even weight and those of `|1>_L` odd weight;
/// the sign is `(-1)^(w + Σ v_i v_{i+1})` around the ring of five qubits.
pub fn code513_amplitudes(value: u8) -> Vec<(String, f64)> {
    (0..32usize)
        .filter(|x| (x.count_ones() as u8 & 1) == (value & 1))
        .map(|x| {
            let bit = |i: usize| x >> (i % 5) & 1;
            let ring: usize = (0..5).map(|i| bit(i) * bit(i + 1)).sum();
            let exponent = x.count_ones() as usize + ring;
            let sign = if exponent % 2 == 0 { 0.25 } else { -0.25 };
            (format_bits(x, 5), sign)
        })
        .collect()
}

fn expand(name: &str, i: usize, j: usize) -> Vec<Gate> {
    rule(name).expect("built-in rule").expand(i, j)
}

/// Device-independent encoder for data on qubit 2, before routing.
pub fn code513_highlevel() -> Vec<Gate> {
    let mut g = vec![
        Gate::Z(2),
        Gate::H(0),
        Gate::H(1),
        Gate::S(1),
        Gate::H(3),
        Gate::S(3),
        Gate::H(4),
        Gate::cx(0, 2),
    ];
    g.extend(expand("cz", 1, 0));
    g.extend(expand("cy", 1, 2));
    g.extend(expand("cz", 3, 1));
    g.extend(expand("cy", 3, 2));
    g.extend(expand("cz", 4, 0));
    g.extend(expand("cz", 4, 1));
    g.push(Gate::cx(4, 2));
    g
}

/// Encodes `|0 0 q2 0 0>` into `|q2>_L` using only `ibmqe-v1` CNOTs.
pub fn gen_513_encoder(q2_value: u8) -> Result<BenchmarkCase, BenchError> {
    if q2_value > 1 {
        return Err(BenchError::InvalidParameter(format!("q2 must be 0 or 1, got {q2_value}")));
    }
    let mut logical = Circuit::new(5, 0);
    if q2_value == 1 {
        logical.append(Gate::X(2))?;
    }
    logical.extend(code513_highlevel())?;
    let routed = route_with(&logical, &CouplingMap::ibmqe_v1(), RouteOptions { restore_layout: true })?;

    let name = format!("code513-q2-{q2_value}");
    let mut c = Circuit::named(&name, 5, 5);
    c.extend(routed.circuit.gates().iter().cloned())?;
    c.measure_all()?;

    let amps = code513_amplitudes(q2_value);
    let support: Vec<&str> = amps.iter().map(|(s, _)| s.as_str()).collect();
    let table = CodewordTable {
        logical0: code513_amplitudes(0),
        logical1: code513_amplitudes(1),
    };
    Ok(BenchmarkCase {
        name,
        suite: "code513".into(),
        circuit: c,
        oracle: Oracle::uniform(&support),
        display_columns: BenchmarkCase::default_columns(5),
        params: serde_json::json!({
            "q2": q2_value,
            "route": routed.stats,
            "signed_amplitudes": amps,
        }),
        postselect: Some(table),
    })
}
