//! CNOT sequences that compose to the identity.

use serde::{Deserialize, Serialize};

use super::{BenchError, BenchmarkCase, Oracle};
use crate::circuit::{Circuit, Gate};

/// A block of CNOTs, given as `(control, target)` pairs, repeated `power` times.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CxBlock {
    pub pairs: Vec<(usize, usize)>,
    pub power: usize,
}

impl CxBlock {
    pub fn new(pairs: &[(usize, usize)], power: usize) -> Self {
        CxBlock {
            pairs: pairs.to_vec(),
            power,
        }
    }
}

/// Descriptor of one identity-sequence experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentitySpec {
    pub name: String,
    pub num_qubits: usize,
    /// Qubits prepared in `|1>`.
    pub input_ones: Vec<usize>,
    /// Gates between preparation and the CNOT blocks.
    pub pre: Vec<Gate>,
    pub blocks: Vec<CxBlock>,
    /// Gates after the CNOT blocks.
    pub post: Vec<Gate>,
    /// `(qubit, clbit)` measurements; the register has one bit per entry.
    pub measured: Vec<(usize, usize)>,
}

impl IdentitySpec {
    /// Gates of the CNOT blocks in order.
    pub fn cx_gates(&self) -> Vec<Gate> {
        self.blocks
            .iter()
            .flat_map(|b| {
                (0..b.power).flat_map(move |_| b.pairs.iter().map(|&(c, t)| Gate::cx(c, t)))
            })
            .collect()
    }

    /// Dressing plus CNOT blocks, without preparation or measurement.
    pub fn body(&self) -> Result<Circuit, BenchError> {
        let mut c = Circuit::new(self.num_qubits, 0);
        c.extend(self.pre.iter().cloned())?;
        c.extend(self.cx_gates())?;
        c.extend(self.post.iter().cloned())?;
        Ok(c)
    }

    /// Expected measured string: the input bits read through `measured`.
    pub fn expected_output(&self) -> String {
        let width = self.measured.len();
        let mut bits = vec!['0'; width];
        for &(q, c) in &self.measured {
            if self.input_ones.contains(&q) {
                bits[width - 1 - c] = '1';
            }
        }
        bits.into_iter().collect()
    }
}

/// Applies the CNOT list to a classical bit pattern.
fn permute(mut x: usize, gates: &[Gate]) -> usize {
    for g in gates {
        if let Gate::CX { control, target } = g {
            if x >> control & 1 == 1 {
                x ^= 1 << target;
            }
        }
    }
    x
}

pub fn gen_identity_sequence(spec: &IdentitySpec) -> Result<BenchmarkCase, BenchError> {
    for (i, b) in spec.blocks.iter().enumerate() {
        if b.power % 2 == 1 {
            return Err(BenchError::OddPower { block: i, power: b.power });
        }
    }
    let cxs = spec.cx_gates();
    if spec.num_qubits > 20 || (0..1usize << spec.num_qubits).any(|x| permute(x, &cxs) != x) {
        return Err(BenchError::NotIdentity);
    }
    let mut c = Circuit::named(&spec.name, spec.num_qubits, spec.measured.len());
    c.extend(spec.input_ones.iter().map(|&q| Gate::X(q)))?;
    let body = spec.body()?;
    c.extend(body.gates().iter().cloned())?;
    c.extend(spec.measured.iter().map(|&(q, cb)| Gate::measure(q, cb)))?;
    let width = spec.measured.len();
    Ok(BenchmarkCase {
        name: spec.name.clone(),
        suite: "identity".into(),
        circuit: c,
        oracle: Oracle::point(spec.expected_output()),
        display_columns: BenchmarkCase::default_columns(width),
        params: serde_json::to_value(spec).expect("plain data"),
        postselect: None,
    })
}

/// The five sequences of the identity-operation table.
pub fn identity_table_rows() -> Vec<IdentitySpec> {
    let mixed = vec![
        CxBlock::new(&[(0, 2), (1, 2)], 2),
        CxBlock::new(&[(0, 2)], 2),
        CxBlock::new(&[(1, 2)], 2),
        CxBlock::new(&[(0, 2), (1, 2)], 2),
    ];
    let low3 = vec![(2, 2), (1, 1), (0, 0)];
    vec![
        IdentitySpec {
            name: "c01x8-in00".into(),
            num_qubits: 5,
            input_ones: vec![],
            pre: vec![],
            blocks: vec![CxBlock::new(&[(0, 1)], 8)],
            post: vec![],
            measured: vec![(1, 1), (0, 0)],
        },
        IdentitySpec {
            name: "c34x8-in00".into(),
            num_qubits: 5,
            input_ones: vec![],
            pre: vec![],
            blocks: vec![CxBlock::new(&[(3, 4)], 8)],
            post: vec![],
            measured: vec![(4, 1), (3, 0)],
        },
        IdentitySpec {
            name: "c34x8-in01".into(),
            num_qubits: 5,
            input_ones: vec![3],
            pre: vec![],
            blocks: vec![CxBlock::new(&[(3, 4)], 8)],
            post: vec![],
            measured: vec![(4, 1), (3, 0)],
        },
        IdentitySpec {
            name: "c02c12-mixed-in111".into(),
            num_qubits: 5,
            input_ones: vec![0, 1, 2],
            pre: vec![],
            blocks: mixed.clone(),
            post: vec![],
            measured: low3.clone(),
        },
        IdentitySpec {
            name: "c02c12-mixed-dressed-in111".into(),
            num_qubits: 5,
            input_ones: vec![0, 1, 2],
            pre: vec![Gate::H(0), Gate::H(1), Gate::X(0), Gate::X(1)],
            blocks: mixed,
            post: vec![Gate::H(0), Gate::H(1)],
            measured: low3,
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{run_exact, unitary_of, Matrix};

    #[test]
    fn table_rows_hold_their_input() {
        for spec in identity_table_rows() {
            let case = gen_identity_sequence(&spec).unwrap();
            let d = run_exact(&case.circuit).unwrap();
            let want = spec.expected_output();
            assert!((d.prob_of(&want) - 1.0).abs() < 1e-10, "{}", spec.name);
        }
    }

    #[test]
    fn expected_strings() {
        let rows = identity_table_rows();
        assert_eq!(rows[0].expected_output(), "00");
        assert_eq!(rows[2].expected_output(), "01");
        assert_eq!(rows[4].expected_output(), "111");
    }

    #[test]
    fn undressed_body_is_identity() {
        for spec in identity_table_rows().iter().filter(|s| s.pre.is_empty()) {
            let u = unitary_of(&spec.body().unwrap()).unwrap();
            assert!(u.max_abs_diff(&Matrix::identity(32)) < 1e-10);
        }
    }

    #[test]
    fn odd_power_rejected() {
        let mut spec = identity_table_rows().remove(0);
        spec.blocks[0].power = 7;
        assert_eq!(gen_identity_sequence(&spec).unwrap_err(), BenchError::OddPower { block: 0, power: 7 });
    }

    #[test]
    fn non_identity_rejected() {
        let mut spec = identity_table_rows().remove(0);
        spec.blocks = vec![CxBlock::new(&[(0, 1), (1, 0)], 2)];
        assert_eq!(gen_identity_sequence(&spec).unwrap_err(), BenchError::NotIdentity);
    }
}
