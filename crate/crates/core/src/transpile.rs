//! Rewriting circuits onto a coupling map.
//!
//! Two-qubit identities are kept as [`RewriteRule`]s whose expansions are
//! checked against hand-written reference matrices when the rule table is
//! first built. [`route`] uses them to make every CNOT legal: reversed pairs
//! go through Hadamard conjugation, and distant pairs move the control next
//! to the target with SWAPs.

use std::collections::{HashMap, VecDeque};
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, CouplingMap, Gate};
use crate::sim::{unitary_of, Matrix, SimError, MAX_UNITARY_QUBITS};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TranspileError {
    #[error("no path joins physical qubits {0} and {1}")]
    Unroutable(usize, usize),
    #[error("circuit has {circuit} qubits but the coupling map has {map}")]
    SizeMismatch { circuit: usize, map: usize },
    #[error("{0} qubits exceed the equivalence-check limit of {MAX_UNITARY_QUBITS}")]
    TooManyQubits(usize),
    #[error("equivalence checks need measurement-free circuits")]
    MeasurementPresent,
    #[error("rewrite rule `{name}` deviates from its reference by {deviation:e}")]
    RuleMismatch { name: String, deviation: f64 },
    #[error("layout covers {0} qubits, circuit has {1}")]
    LayoutSize(usize, usize),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

impl From<SimError> for TranspileError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::TooManyQubits(n) => TranspileError::TooManyQubits(n),
            _ => TranspileError::MeasurementPresent,
        }
    }
}

/// `[H_j, CX(i,j), H_j]`.
pub fn expand_cz(i: usize, j: usize) -> Vec<Gate> {
    assert_ne!(i, j, "controlled gates need distinct qubits");
    vec![Gate::H(j), Gate::cx(i, j), Gate::H(j)]
}

/// Controlled `-Z`: `[H_j, CX(i,j), H_j, Z_i]`.
pub fn expand_cminusz(i: usize, j: usize) -> Vec<Gate> {
    assert_ne!(i, j, "controlled gates need distinct qubits");
    vec![Gate::H(j), Gate::cx(i, j), Gate::H(j), Gate::Z(i)]
}

/// `[H_j, CX(i,j), H_j, CX(i,j), S_i]`, exactly controlled-Y.
pub fn expand_cy(i: usize, j: usize) -> Vec<Gate> {
    assert_ne!(i, j, "controlled gates need distinct qubits");
    vec![Gate::H(j), Gate::cx(i, j), Gate::H(j), Gate::cx(i, j), Gate::S(i)]
}

/// CX(i,j) written with the opposite CNOT direction.
pub fn reverse_cnot(i: usize, j: usize) -> Vec<Gate> {
    assert_ne!(i, j, "controlled gates need distinct qubits");
    vec![Gate::H(i), Gate::H(j), Gate::cx(j, i), Gate::H(i), Gate::H(j)]
}

pub fn expand_swap(i: usize, j: usize) -> Vec<Gate> {
    assert_ne!(i, j, "swap needs distinct qubits");
    vec![Gate::cx(i, j), Gate::cx(j, i), Gate::cx(i, j)]
}

/// A verified two-qubit identity.
#[derive(Debug, Clone)]
pub struct RewriteRule {
    pub name: &'static str,
    /// Unitary the replacement must realise, with operand `i` as qubit 0.
    pub pattern: Matrix,
    pub replacement: fn(usize, usize) -> Vec<Gate>,
}

impl RewriteRule {
    /// Checks the replacement against `pattern` up to global phase at `tol`.
    pub fn register(
        name: &'static str,
        pattern: Matrix,
        replacement: fn(usize, usize) -> Vec<Gate>,
        tol: f64,
    ) -> Result<Self, TranspileError> {
        let mut c = Circuit::new(2, 0);
        c.extend(replacement(0, 1))?;
        let deviation = unitary_of(&c)?.phase_distance(&pattern);
        if deviation >= tol {
            return Err(TranspileError::RuleMismatch {
                name: name.to_string(),
                deviation,
            });
        }
        Ok(RewriteRule {
            name,
            pattern,
            replacement,
        })
    }

    pub fn expand(&self, i: usize, j: usize) -> Vec<Gate> {
        (self.replacement)(i, j)
    }
}

/// Reference two-qubit matrix from the image of each basis index.
/// Index bit 0 is operand `i`, bit 1 operand `j`.
fn basis_map(images: [(usize, Complex64); 4]) -> Matrix {
    let mut m = Matrix::zeros(4);
    for (col, (row, amp)) in images.into_iter().enumerate() {
        m[(row, col)] = amp;
    }
    m
}

/// The five rewrite rules, verified at 1e-10 on first use.
pub fn rules() -> &'static [RewriteRule] {
    static RULES: OnceLock<Vec<RewriteRule>> = OnceLock::new();
    RULES.get_or_init(|| {
        let one = Complex64::new(1.0, 0.0);
        let neg = -one;
        let i = Complex64::new(0.0, 1.0);
        let cx = basis_map([(0, one), (3, one), (2, one), (1, one)]);
        let table: [(&'static str, Matrix, fn(usize, usize) -> Vec<Gate>); 5] = [
            ("cz", basis_map([(0, one), (1, one), (2, one), (3, neg)]), expand_cz),
            ("cminusz", basis_map([(0, one), (1, neg), (2, one), (3, one)]), expand_cminusz),
            ("cy", basis_map([(0, one), (3, i), (2, one), (1, -i)]), expand_cy),
            ("reverse_cnot", cx, reverse_cnot),
            ("swap", basis_map([(0, one), (2, one), (1, one), (3, one)]), expand_swap),
        ];
        table
            .into_iter()
            .map(|(name, m, f)| RewriteRule::register(name, m, f, 1e-10).unwrap_or_else(|e| panic!("{e}")))
            .collect()
    })
}

pub fn rule(name: &str) -> Option<&'static RewriteRule> {
    rules().iter().find(|r| r.name == name)
}

/// Logical to physical qubit assignment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Layout {
    l2p: Vec<usize>,
}

impl Layout {
    pub fn identity(n: usize) -> Self {
        Layout { l2p: (0..n).collect() }
    }

    /// `None` unless `l2p` is a permutation of `0..len`.
    pub fn from_vec(l2p: Vec<usize>) -> Option<Self> {
        let mut seen = vec![false; l2p.len()];
        for &p in &l2p {
            if p >= l2p.len() || std::mem::replace(&mut seen[p], true) {
                return None;
            }
        }
        Some(Layout { l2p })
    }

    pub fn len(&self) -> usize {
        self.l2p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.l2p.is_empty()
    }

    pub fn physical(&self, logical: usize) -> usize {
        self.l2p[logical]
    }

    pub fn logical(&self, physical: usize) -> usize {
        self.l2p.iter().position(|&p| p == physical).expect("bijective layout")
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.l2p
    }

    pub fn is_identity(&self) -> bool {
        self.l2p.iter().enumerate().all(|(l, &p)| l == p)
    }

    /// Exchanges whatever logical qubits sit on physical `a` and `b`.
    pub fn swap_physical(&mut self, a: usize, b: usize) {
        let (la, lb) = (self.logical(a), self.logical(b));
        self.l2p.swap(la, lb);
    }

    /// Permutation matrix sending a logical basis state to its physical image.
    pub fn permutation_matrix(&self) -> Matrix {
        let dim = 1usize << self.l2p.len();
        let mut m = Matrix::zeros(dim);
        for x in 0..dim {
            let y = self
                .l2p
                .iter()
                .enumerate()
                .fold(0usize, |acc, (l, &p)| acc | ((x >> l & 1) << p));
            m[(y, x)] = Complex64::new(1.0, 0.0);
        }
        m
    }
}

/// Gate-count accounting of a routing pass.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct RouteStats {
    /// CNOTs written in the opposite direction; each adds 4 H.
    pub reversed_cnots: usize,
    /// SWAPs inserted while routing; each adds 3 CX.
    pub swaps: usize,
    /// SWAPs appended to restore the initial layout.
    pub restore_swaps: usize,
    pub added_h: usize,
    pub added_cx: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Routed {
    pub circuit: Circuit,
    pub layout: Layout,
    pub stats: RouteStats,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RouteOptions {
    /// Undo the accumulated SWAP permutation before the first measurement.
    pub restore_layout: bool,
}

struct Router<'a> {
    map: &'a CouplingMap,
    out: Circuit,
    layout: Layout,
    stats: RouteStats,
}

impl Router<'_> {
    fn emit_cx(&mut self, pc: usize, pt: usize) -> Result<(), TranspileError> {
        if self.map.allows(pc, pt) {
            self.out.append(Gate::cx(pc, pt))?;
        } else if self.map.allows(pt, pc) {
            self.out.extend(reverse_cnot(pc, pt))?;
            self.stats.reversed_cnots += 1;
            self.stats.added_h += 4;
        } else {
            return Err(TranspileError::Unroutable(pc, pt));
        }
        Ok(())
    }

    /// SWAP between adjacent physical qubits, built from legal CNOTs.
    fn emit_swap(&mut self, a: usize, b: usize) -> Result<(), TranspileError> {
        let (x, y) = if self.map.allows(a, b) { (a, b) } else { (b, a) };
        for g in expand_swap(x, y) {
            if let Gate::CX { control, target } = g {
                self.emit_cx(control, target)?;
            }
        }
        self.stats.added_cx += 3;
        self.layout.swap_physical(a, b);
        Ok(())
    }

    fn route_cx(&mut self, c: usize, t: usize) -> Result<(), TranspileError> {
        let (pc, pt) = (self.layout.physical(c), self.layout.physical(t));
        if !self.map.allows(pc, pt) && !self.map.allows(pt, pc) {
            let path = self
                .map
                .shortest_path(pc, pt)
                .ok_or(TranspileError::Unroutable(pc, pt))?;
            for w in path.windows(2).take(path.len() - 2) {
                self.emit_swap(w[0], w[1])?;
                self.stats.swaps += 1;
            }
        }
        let (pc, pt) = (self.layout.physical(c), self.layout.physical(t));
        self.emit_cx(pc, pt)
    }

    fn restore(&mut self) -> Result<(), TranspileError> {
        for (a, b) in restore_swaps(self.map, &self.layout) {
            self.emit_swap(a, b)?;
            self.stats.restore_swaps += 1;
        }
        Ok(())
    }
}

/// Largest map for which the restoring swap sequence is searched exhaustively.
const EXACT_RESTORE_QUBITS: usize = 8;

/// Sequence of adjacent physical swaps that returns `layout` to the identity.
///
/// Small maps get a shortest sequence from a breadth-first search over
/// permutations; larger ones fall back to leaf elimination.
pub fn restore_swaps(map: &CouplingMap, layout: &Layout) -> Vec<(usize, usize)> {
    if layout.is_identity() {
        return Vec::new();
    }
    if layout.len() <= EXACT_RESTORE_QUBITS {
        if let Some(swaps) = shortest_restore(map, layout) {
            return swaps;
        }
    }
    leaf_elimination(map, layout)
}

fn shortest_restore(map: &CouplingMap, layout: &Layout) -> Option<Vec<(usize, usize)>> {
    let n = layout.len();
    let mut edges: Vec<(usize, usize)> = map.pairs().map(|(a, b)| (a.min(b), a.max(b))).collect();
    edges.sort_unstable();
    edges.dedup();
    let start = layout.as_slice().to_vec();
    let goal: Vec<usize> = (0..n).collect();
    let mut prev: HashMap<Vec<usize>, Option<(Vec<usize>, (usize, usize))>> = HashMap::new();
    prev.insert(start.clone(), None);
    let mut queue = VecDeque::from([start]);
    while let Some(state) = queue.pop_front() {
        if state == goal {
            let mut swaps = Vec::new();
            let mut cur = state;
            while let Some(Some((before, swap))) = prev.get(&cur) {
                swaps.push(*swap);
                cur = before.clone();
            }
            swaps.reverse();
            return Some(swaps);
        }
        let mut lay = Layout::from_vec(state.clone()).expect("permutation");
        for &(a, b) in &edges {
            lay.swap_physical(a, b);
            let next = lay.as_slice().to_vec();
            lay.swap_physical(a, b);
            if !prev.contains_key(&next) {
                prev.insert(next.clone(), Some((state.clone(), (a, b))));
                queue.push_back(next);
            }
        }
    }
    None
}

fn leaf_elimination(map: &CouplingMap, layout: &Layout) -> Vec<(usize, usize)> {
    let n = layout.len();
    let mut cur = layout.clone();
    let mut alive = vec![true; n];
    let mut swaps = Vec::new();
    let components = |alive: &[bool]| -> usize {
        let mut seen = vec![false; n];
        let mut count = 0;
        for s in 0..n {
            if !alive[s] || seen[s] {
                continue;
            }
            count += 1;
            let mut queue = VecDeque::from([s]);
            seen[s] = true;
            while let Some(u) = queue.pop_front() {
                for v in map.neighbors(u) {
                    if alive[v] && !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
        }
        count
    };
    for _ in 0..n {
        let before = components(&alive);
        let candidates: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
        let v = candidates
            .into_iter()
            .find(|&v| {
                alive[v] = false;
                let ok = components(&alive) <= before;
                alive[v] = true;
                ok
            })
            .expect("every graph has a vertex whose removal keeps components apart");
        let mut prev = vec![usize::MAX; n];
        let from = cur.physical(v);
        let mut queue = VecDeque::from([from]);
        prev[from] = from;
        while let Some(u) = queue.pop_front() {
            for w in map.neighbors(u) {
                if alive[w] && prev[w] == usize::MAX {
                    prev[w] = u;
                    queue.push_back(w);
                }
            }
        }
        let mut path = vec![v];
        while *path.last().expect("nonempty") != from {
            let last = *path.last().expect("nonempty");
            path.push(prev[last]);
        }
        path.reverse();
        for w in path.windows(2) {
            cur.swap_physical(w[0], w[1]);
            swaps.push((w[0].min(w[1]), w[0].max(w[1])));
        }
        alive[v] = false;
    }
    swaps
}

/// Rewrites `circuit` so every CNOT is allowed by `map`.
///
/// The result acts as `P(layout) · U` where `U` is the input unitary; the
/// permutation is reported rather than undone unless `restore_layout` is set.
/// Measurements keep their classical bit and read the qubit's current
/// physical position.
pub fn route_with(circuit: &Circuit, map: &CouplingMap, opts: RouteOptions) -> Result<Routed, TranspileError> {
    if circuit.num_qubits() > map.num_qubits() {
        return Err(TranspileError::SizeMismatch {
            circuit: circuit.num_qubits(),
            map: map.num_qubits(),
        });
    }
    let mut r = Router {
        map,
        out: Circuit::named(circuit.name(), map.num_qubits(), circuit.num_clbits()),
        layout: Layout::identity(map.num_qubits()),
        stats: RouteStats::default(),
    };
    let mut restored = false;
    for g in circuit.gates() {
        match g {
            Gate::CX { control, target } => r.route_cx(*control, *target)?,
            Gate::Measure { .. } if opts.restore_layout && !restored => {
                r.restore()?;
                restored = true;
                r.out.append(g.map_qubits(|q| r.layout.physical(q)))?;
            }
            other => {
                let mapped = other.map_qubits(|q| r.layout.physical(q));
                r.out.append(mapped)?;
            }
        }
    }
    if opts.restore_layout && !r.layout.is_identity() {
        r.restore()?;
    }
    Ok(Routed {
        circuit: r.out,
        layout: r.layout,
        stats: r.stats,
    })
}

/// [`route_with`] using default options (layout reported, not restored).
pub fn route(circuit: &Circuit, map: &CouplingMap) -> Result<Routed, TranspileError> {
    route_with(circuit, map, RouteOptions::default())
}

/// Pads a circuit with idle qubits.
pub fn widen(circuit: &Circuit, num_qubits: usize) -> Circuit {
    let mut out = Circuit::named(circuit.name(), num_qubits.max(circuit.num_qubits()), circuit.num_clbits());
    out.extend(circuit.gates().iter().cloned()).expect("indices stay in range");
    out
}

/// Whether `c2` implements `P(layout) · U(c1)` up to global phase within `tol`.
pub fn verify_equivalence(c1: &Circuit, c2: &Circuit, layout: &Layout, tol: f64) -> Result<bool, TranspileError> {
    Ok(equivalence_error(c1, c2, layout)? < tol)
}

/// Phase-corrected max elementwise deviation used by [`verify_equivalence`].
pub fn equivalence_error(c1: &Circuit, c2: &Circuit, layout: &Layout) -> Result<f64, TranspileError> {
    let n = c1.num_qubits().max(c2.num_qubits());
    if n > MAX_UNITARY_QUBITS {
        return Err(TranspileError::TooManyQubits(n));
    }
    if layout.len() != n {
        return Err(TranspileError::LayoutSize(layout.len(), n));
    }
    let u1 = unitary_of(&widen(c1, n))?;
    let u2 = unitary_of(&widen(c2, n))?;
    Ok(u2.phase_distance(&layout.permutation_matrix().mul(&u1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::validate_coupling;
    use crate::sim::StateVector;

    fn circ(n: usize, gates: Vec<Gate>) -> Circuit {
        let mut c = Circuit::new(n, 0);
        c.extend(gates).unwrap();
        c
    }

    fn run(n: usize, gates: Vec<Gate>, input: usize) -> StateVector {
        let mut s = StateVector::basis(n, input);
        for g in gates {
            s.apply(&g).unwrap();
        }
        s
    }

    #[test]
    fn all_rules_register() {
        let names: Vec<&str> = rules().iter().map(|r| r.name).collect();
        assert_eq!(names, ["cz", "cminusz", "cy", "reverse_cnot", "swap"]);
    }

    #[test]
    fn wrong_rule_is_rejected() {
        let id = Matrix::identity(4);
        assert!(matches!(
            RewriteRule::register("bogus", id, expand_cz, 1e-10),
            Err(TranspileError::RuleMismatch { .. })
        ));
    }

    #[test]
    fn cz_is_symmetric_and_flips_11() {
        let a = unitary_of(&circ(2, expand_cz(0, 1))).unwrap();
        let b = unitary_of(&circ(2, expand_cz(1, 0))).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-12);
        let s = run(2, expand_cz(0, 1), 3);
        assert!((s.amplitude(3) + 1.0).norm() < 1e-12);
    }

    #[test]
    fn cminusz_on_basis_states() {
        assert!((run(2, expand_cminusz(0, 1), 0).amplitude(0) - 1.0).norm() < 1e-12);
        // control qubit 0 set, target clear
        assert!((run(2, expand_cminusz(0, 1), 0b01).amplitude(0b01) + 1.0).norm() < 1e-12);
    }

    #[test]
    fn cy_on_basis_states() {
        let off = run(2, expand_cy(1, 0), 0b01);
        assert!((off.amplitude(0b01) - 1.0).norm() < 1e-12);
        let on = run(2, expand_cy(1, 0), 0b10);
        assert!((on.amplitude(0b11) - Complex64::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn reversed_cnot_truth_table() {
        let s = run(2, reverse_cnot(1, 0), 0b10);
        assert!((s.amplitude(0b11) - 1.0).norm() < 1e-12);
        let mut twice = reverse_cnot(0, 1);
        twice.extend(reverse_cnot(0, 1));
        assert!(unitary_of(&circ(2, twice)).unwrap().max_abs_diff(&Matrix::identity(4)) < 1e-12);
    }

    #[test]
    fn swap_examples() {
        let s = run(2, expand_swap(1, 0), 0b10);
        assert!((s.amplitude(0b01) - 1.0).norm() < 1e-12);
        let mut twice = expand_swap(0, 1);
        twice.extend(expand_swap(0, 1));
        assert!(unitary_of(&circ(2, twice)).unwrap().max_abs_diff(&Matrix::identity(4)) < 1e-12);
    }

    #[test]
    fn route_reversed_cnot() {
        let c = circ(5, vec![Gate::cx(2, 1)]);
        let r = route(&c, &CouplingMap::ibmqe_v1()).unwrap();
        assert_eq!(r.circuit.gates(), reverse_cnot(2, 1).as_slice());
        assert!(r.layout.is_identity());
        assert_eq!(r.stats.added_h, 4);
        assert!(verify_equivalence(&c, &r.circuit, &r.layout, 1e-10).unwrap());
    }

    #[test]
    fn route_through_hub() {
        let c = circ(5, vec![Gate::H(0), Gate::cx(0, 1)]);
        let map = CouplingMap::ibmqe_v1();
        let r = route(&c, &map).unwrap();
        assert!(validate_coupling(&r.circuit, &map).is_empty());
        assert!(!r.layout.is_identity());
        assert_eq!(r.stats.swaps, 1);
        assert_eq!(r.circuit.cx_count(), 1 + 3);
        assert!(verify_equivalence(&c, &r.circuit, &r.layout, 1e-10).unwrap());
        assert!(!verify_equivalence(&c, &r.circuit, &Layout::identity(5), 1e-10).unwrap());
    }

    #[test]
    fn legal_circuit_unchanged() {
        let c = circ(5, vec![Gate::H(0), Gate::cx(0, 2), Gate::cx(4, 2)]);
        let r = route(&c, &CouplingMap::ibmqe_v1()).unwrap();
        assert!(r.circuit.same_structure(&c));
        assert!(r.layout.is_identity());
    }

    #[test]
    fn restore_returns_to_identity() {
        let map = CouplingMap::ibmqe_v1();
        let mut c = Circuit::new(5, 5);
        c.extend([Gate::X(0), Gate::cx(0, 1), Gate::cx(3, 4), Gate::cx(1, 0)]).unwrap();
        c.measure_all().unwrap();
        let r = route_with(&c, &map, RouteOptions { restore_layout: true }).unwrap();
        assert!(r.layout.is_identity());
        assert!(validate_coupling(&r.circuit, &map).is_empty());
        let a = crate::sim::run_exact(&c).unwrap();
        let b = crate::sim::run_exact(&r.circuit).unwrap();
        assert!(a.probs().iter().zip(b.probs()).all(|(x, y)| (x - y).abs() < 1e-12));
    }

    #[test]
    fn restore_handles_every_permutation_on_a_line() {
        let line = CouplingMap::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let mut perm = vec![0, 1, 2, 3];
        // all 24 permutations via Heap's algorithm
        fn heap(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if k == 1 {
                out.push(a.clone());
                return;
            }
            for i in 0..k {
                heap(k - 1, a, out);
                if k % 2 == 0 { a.swap(i, k - 1) } else { a.swap(0, k - 1) }
            }
        }
        let mut all = Vec::new();
        heap(4, &mut perm, &mut all);
        for p in all {
            let lay = Layout::from_vec(p).unwrap();
            let mut cur = lay.clone();
            for (a, b) in restore_swaps(&line, &lay) {
                assert!(line.allows(a, b) || line.allows(b, a));
                cur.swap_physical(a, b);
            }
            assert!(cur.is_identity());
        }
    }

    #[test]
    fn unroutable_pair() {
        let split = CouplingMap::new(4, [(0, 1), (2, 3)]).unwrap();
        let c = circ(4, vec![Gate::cx(0, 3)]);
        assert_eq!(route(&c, &split).unwrap_err(), TranspileError::Unroutable(0, 3));
    }

    #[test]
    fn equivalence_examples() {
        let c = circ(2, vec![Gate::H(0), Gate::cx(0, 1), Gate::T(1)]);
        assert!(verify_equivalence(&c, &c, &Layout::identity(2), 1e-12).unwrap());
        let cx = circ(2, vec![Gate::cx(0, 1)]);
        assert!(verify_equivalence(&cx, &circ(2, reverse_cnot(0, 1)), &Layout::identity(2), 1e-10).unwrap());
        assert!(!verify_equivalence(&cx, &circ(2, expand_cz(0, 1)), &Layout::identity(2), 1e-10).unwrap());
        let big = Circuit::new(11, 0);
        assert_eq!(
            verify_equivalence(&big, &big, &Layout::identity(11), 1e-10).unwrap_err(),
            TranspileError::TooManyQubits(11)
        );
    }

    #[test]
    fn layout_validation() {
        assert!(Layout::from_vec(vec![1, 0, 2]).is_some());
        assert!(Layout::from_vec(vec![1, 1, 2]).is_none());
        assert!(Layout::from_vec(vec![0, 3]).is_none());
    }
}
