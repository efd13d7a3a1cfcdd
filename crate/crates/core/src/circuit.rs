//! Circuits, gates, device connectivity and timing.
//!
//! Bit-order convention used everywhere in this crate: a measured bitstring
//! is written with classical bit 0 as the RIGHTMOST character, i.e.
//! `"c4 c3 c2 c1 c0"`. Benchmark circuits measure qubit `i` into classical
//! bit `i` unless a case states otherwise, so the same string reads
//! `"q4 q3 q2 q1 q0"`.

use std::collections::BTreeSet;
use std::f64::consts::FRAC_PI_2;
use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CircuitError {
    #[error("qubit index {index} out of range for {size}-qubit circuit")]
    QubitOutOfRange { index: usize, size: usize },
    #[error("classical bit index {index} out of range for {size}-bit register")]
    ClbitOutOfRange { index: usize, size: usize },
    #[error("cx control and target are both qubit {0}")]
    SelfPair(usize),
    #[error("u1 angle must be finite, got {0}")]
    NonFiniteAngle(f64),
    #[error("gate on qubit {0} follows its measurement")]
    AfterMeasure(usize),
    #[error("barrier lists qubit {0} twice")]
    DuplicateBarrierQubit(usize),
}

/// A gate from the device gate set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gate {
    X(usize),
    Y(usize),
    Z(usize),
    H(usize),
    S(usize),
    Sdg(usize),
    T(usize),
    Tdg(usize),
    /// `diag(1, e^{i lambda})`.
    U1 { qubit: usize, lambda: f64 },
    CX { control: usize, target: usize },
    Barrier(Vec<usize>),
    Measure { qubit: usize, clbit: usize },
}

impl Gate {
    pub fn u1(qubit: usize, lambda: f64) -> Self {
        Gate::U1 { qubit, lambda }
    }

    pub fn cx(control: usize, target: usize) -> Self {
        Gate::CX { control, target }
    }

    pub fn measure(qubit: usize, clbit: usize) -> Self {
        Gate::Measure { qubit, clbit }
    }

    /// Qubits the gate acts on, in operand order.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::X(q)
            | Gate::Y(q)
            | Gate::Z(q)
            | Gate::H(q)
            | Gate::S(q)
            | Gate::Sdg(q)
            | Gate::T(q)
            | Gate::Tdg(q)
            | Gate::U1 { qubit: q, .. }
            | Gate::Measure { qubit: q, .. } => vec![*q],
            Gate::CX { control, target } => vec![*control, *target],
            Gate::Barrier(qs) => qs.clone(),
        }
    }

    /// Same gate with every qubit index passed through `f`.
    pub fn map_qubits(&self, f: impl Fn(usize) -> usize) -> Gate {
        match self {
            Gate::X(q) => Gate::X(f(*q)),
            Gate::Y(q) => Gate::Y(f(*q)),
            Gate::Z(q) => Gate::Z(f(*q)),
            Gate::H(q) => Gate::H(f(*q)),
            Gate::S(q) => Gate::S(f(*q)),
            Gate::Sdg(q) => Gate::Sdg(f(*q)),
            Gate::T(q) => Gate::T(f(*q)),
            Gate::Tdg(q) => Gate::Tdg(f(*q)),
            Gate::U1 { qubit, lambda } => Gate::U1 {
                qubit: f(*qubit),
                lambda: *lambda,
            },
            Gate::CX { control, target } => Gate::CX {
                control: f(*control),
                target: f(*target),
            },
            Gate::Barrier(qs) => Gate::Barrier(qs.iter().map(|q| f(*q)).collect()),
            Gate::Measure { qubit, clbit } => Gate::Measure {
                qubit: f(*qubit),
                clbit: *clbit,
            },
        }
    }

    pub fn is_unitary(&self) -> bool {
        !matches!(self, Gate::Barrier(_) | Gate::Measure { .. })
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::CX { .. })
    }

    /// Phase angle for gates that are `diag(1, e^{i phi})`.
    pub fn phase_angle(&self) -> Option<f64> {
        match self {
            Gate::Z(_) => Some(std::f64::consts::PI),
            Gate::S(_) => Some(FRAC_PI_2),
            Gate::Sdg(_) => Some(-FRAC_PI_2),
            Gate::T(_) => Some(FRAC_PI_4),
            Gate::Tdg(_) => Some(-FRAC_PI_4),
            Gate::U1 { lambda, .. } => Some(*lambda),
            _ => None,
        }
    }

    /// QASM mnemonic.
    pub fn name(&self) -> &'static str {
        match self {
            Gate::X(_) => "x",
            Gate::Y(_) => "y",
            Gate::Z(_) => "z",
            Gate::H(_) => "h",
            Gate::S(_) => "s",
            Gate::Sdg(_) => "sdg",
            Gate::T(_) => "t",
            Gate::Tdg(_) => "tdg",
            Gate::U1 { .. } => "u1",
            Gate::CX { .. } => "cx",
            Gate::Barrier(_) => "barrier",
            Gate::Measure { .. } => "measure",
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::U1 { qubit, lambda } => write!(f, "u1({lambda}) q[{qubit}]"),
            Gate::CX { control, target } => write!(f, "cx q[{control}],q[{target}]"),
            Gate::Barrier(qs) => {
                let list: Vec<String> = qs.iter().map(|q| format!("q[{q}]")).collect();
                write!(f, "barrier {}", list.join(","))
            }
            Gate::Measure { qubit, clbit } => write!(f, "measure q[{qubit}] -> c[{clbit}]"),
            g => write!(f, "{} q[{}]", g.name(), g.qubits()[0]),
        }
    }
}

/// An ordered gate list over `num_qubits` qubits and `num_clbits` classical bits.
///
/// Gates can only be added through [`Circuit::append`], which enforces index
/// ranges and the measure-last rule, so a `Circuit` value is always valid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Circuit {
    name: String,
    num_qubits: usize,
    num_clbits: usize,
    gates: Vec<Gate>,
    #[serde(skip)]
    measured: BTreeSet<usize>,
}

impl Circuit {
    pub fn new(num_qubits: usize, num_clbits: usize) -> Self {
        Self::named("", num_qubits, num_clbits)
    }

    pub fn named(name: impl Into<String>, num_qubits: usize, num_clbits: usize) -> Self {
        Circuit {
            name: name.into(),
            num_qubits,
            num_clbits,
            gates: Vec::new(),
            measured: BTreeSet::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_clbits(&self) -> usize {
        self.num_clbits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    fn check_qubit(&self, q: usize) -> Result<(), CircuitError> {
        if q >= self.num_qubits {
            return Err(CircuitError::QubitOutOfRange {
                index: q,
                size: self.num_qubits,
            });
        }
        Ok(())
    }

    /// Checks `gate` against this circuit without adding it.
    pub fn check(&self, gate: &Gate) -> Result<(), CircuitError> {
        for q in gate.qubits() {
            self.check_qubit(q)?;
        }
        match gate {
            Gate::CX { control, target } if control == target => {
                return Err(CircuitError::SelfPair(*control))
            }
            Gate::U1 { lambda, .. } if !lambda.is_finite() => {
                return Err(CircuitError::NonFiniteAngle(*lambda))
            }
            Gate::Measure { clbit, .. } if *clbit >= self.num_clbits => {
                return Err(CircuitError::ClbitOutOfRange {
                    index: *clbit,
                    size: self.num_clbits,
                })
            }
            Gate::Barrier(qs) => {
                let mut seen = BTreeSet::new();
                for q in qs {
                    if !seen.insert(*q) {
                        return Err(CircuitError::DuplicateBarrierQubit(*q));
                    }
                }
            }
            _ => {}
        }
        // Barriers after the final measurements are harmless.
        if !matches!(gate, Gate::Barrier(_)) {
            if let Some(q) = gate.qubits().into_iter().find(|q| self.measured.contains(q)) {
                return Err(CircuitError::AfterMeasure(q));
            }
        }
        Ok(())
    }

    pub fn append(&mut self, gate: Gate) -> Result<&mut Self, CircuitError> {
        self.check(&gate)?;
        if let Gate::Measure { qubit, .. } = gate {
            self.measured.insert(qubit);
        }
        self.gates.push(gate);
        Ok(self)
    }

    pub fn extend<I: IntoIterator<Item = Gate>>(&mut self, gates: I) -> Result<&mut Self, CircuitError> {
        for g in gates {
            self.append(g)?;
        }
        Ok(self)
    }

    /// Builder form of [`Circuit::append`].
    pub fn with(mut self, gate: Gate) -> Result<Self, CircuitError> {
        self.append(gate)?;
        Ok(self)
    }

    /// Measures qubit `i` into classical bit `i` for every `i < num_clbits`.
    pub fn measure_all(&mut self) -> Result<&mut Self, CircuitError> {
        for q in 0..self.num_clbits.min(self.num_qubits) {
            self.append(Gate::measure(q, q))?;
        }
        Ok(self)
    }

    /// `self` followed by `other`; register sizes must agree.
    pub fn concat(&self, other: &Circuit) -> Result<Circuit, CircuitError> {
        let mut out = self.clone();
        out.num_qubits = out.num_qubits.max(other.num_qubits);
        out.num_clbits = out.num_clbits.max(other.num_clbits);
        out.extend(other.gates.iter().cloned())?;
        Ok(out)
    }

    /// `(qubit, clbit)` pairs of every measurement, in program order.
    pub fn measurements(&self) -> Vec<(usize, usize)> {
        self.gates
            .iter()
            .filter_map(|g| match g {
                Gate::Measure { qubit, clbit } => Some((*qubit, *clbit)),
                _ => None,
            })
            .collect()
    }

    pub fn has_measurements(&self) -> bool {
        self.gates.iter().any(|g| matches!(g, Gate::Measure { .. }))
    }

    /// Copy of the circuit with measurements removed.
    pub fn without_measurements(&self) -> Circuit {
        let mut out = Circuit::named(self.name.clone(), self.num_qubits, self.num_clbits);
        out.gates = self
            .gates
            .iter()
            .filter(|g| !matches!(g, Gate::Measure { .. }))
            .cloned()
            .collect();
        out
    }

    /// Equality of registers and gate lists, ignoring the name.
    pub fn same_structure(&self, other: &Circuit) -> bool {
        self.num_qubits == other.num_qubits
            && self.num_clbits == other.num_clbits
            && self.gates == other.gates
    }

    pub fn count(&self, pred: impl Fn(&Gate) -> bool) -> usize {
        self.gates.iter().filter(|g| pred(g)).count()
    }

    pub fn cx_count(&self) -> usize {
        self.count(Gate::is_two_qubit)
    }

    /// Number of gates that occupy device time (no barriers or measurements).
    pub fn op_count(&self) -> usize {
        self.count(Gate::is_unitary)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeviceError {
    #[error("coupling pair ({0},{0}) pairs a qubit with itself")]
    SelfPair(usize),
    #[error("coupling pair ({0},{1}) references a qubit outside 0..{2}")]
    OutOfRange(usize, usize, usize),
    #[error("device parameter `{0}` must be positive")]
    NonPositive(&'static str),
    #[error("unknown device profile `{0}`")]
    UnknownProfile(String),
    #[error("invalid device document: {0}")]
    Parse(String),
    #[error("cannot read device document: {0}")]
    Io(String),
}

/// Directed CNOT permissions: `(control, target)` pairs the device supports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplingMap {
    num_qubits: usize,
    allowed: BTreeSet<(usize, usize)>,
}

impl CouplingMap {
    pub fn new(
        num_qubits: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, DeviceError> {
        let mut allowed = BTreeSet::new();
        for (c, t) in pairs {
            if c == t {
                return Err(DeviceError::SelfPair(c));
            }
            if c >= num_qubits || t >= num_qubits {
                return Err(DeviceError::OutOfRange(c, t, num_qubits));
            }
            allowed.insert((c, t));
        }
        Ok(CouplingMap {
            num_qubits,
            allowed,
        })
    }

    /// Every ordered pair allowed.
    pub fn all_to_all(num_qubits: usize) -> Self {
        let pairs = (0..num_qubits)
            .flat_map(|c| (0..num_qubits).filter(move |t| *t != c).map(move |t| (c, t)));
        CouplingMap::new(num_qubits, pairs).expect("valid by construction")
    }

    /// The first 5-qubit device: every CNOT targets qubit 2.
    pub fn ibmqe_v1() -> Self {
        CouplingMap::new(5, [(0, 2), (1, 2), (3, 2), (4, 2)]).expect("valid by construction")
    }

    /// The revised device: the star plus (0,1) and (3,4).
    pub fn ibmqe_v2() -> Self {
        CouplingMap::new(5, [(0, 2), (1, 2), (3, 2), (4, 2), (0, 1), (3, 4)])
            .expect("valid by construction")
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn allows(&self, control: usize, target: usize) -> bool {
        self.allowed.contains(&(control, target))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.allowed.iter().copied()
    }

    /// Qubits joined to `q` by an allowed pair in either direction.
    pub fn neighbors(&self, q: usize) -> Vec<usize> {
        let set: BTreeSet<usize> = self
            .allowed
            .iter()
            .filter_map(|&(c, t)| {
                if c == q {
                    Some(t)
                } else if t == q {
                    Some(c)
                } else {
                    None
                }
            })
            .collect();
        set.into_iter().collect()
    }

    /// Undirected distance matrix; `usize::MAX` marks unreachable pairs.
    pub fn distances(&self) -> Vec<Vec<usize>> {
        let n = self.num_qubits;
        (0..n)
            .map(|src| {
                let mut dist = vec![usize::MAX; n];
                dist[src] = 0;
                let mut queue = std::collections::VecDeque::from([src]);
                while let Some(u) = queue.pop_front() {
                    for v in self.neighbors(u) {
                        if dist[v] == usize::MAX {
                            dist[v] = dist[u] + 1;
                            queue.push_back(v);
                        }
                    }
                }
                dist
            })
            .collect()
    }

    /// Shortest undirected path from `from` to `to`, endpoints included.
    /// Ties resolve towards lower qubit indices.
    pub fn shortest_path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        let n = self.num_qubits;
        let mut prev = vec![usize::MAX; n];
        let mut seen = vec![false; n];
        seen[from] = true;
        let mut queue = std::collections::VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            if u == to {
                let mut path = vec![to];
                let mut cur = to;
                while cur != from {
                    cur = prev[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for v in self.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        None
    }
}

/// Gate timings and limits of a device.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviceProfile {
    /// Seconds per single-qubit gate.
    pub duration_1q: f64,
    /// Seconds per CNOT.
    pub duration_cx: f64,
    /// Single-qubit coherence time in seconds.
    pub coherence_time: f64,
    /// Gate budget of the device; exceeding it only produces a warning.
    pub max_gates: usize,
}

impl DeviceProfile {
    pub fn new(
        duration_1q: f64,
        duration_cx: f64,
        coherence_time: f64,
        max_gates: usize,
    ) -> Result<Self, DeviceError> {
        for (name, v) in [
            ("duration_1q", duration_1q),
            ("duration_cx", duration_cx),
            ("coherence_time", coherence_time),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(DeviceError::NonPositive(name));
            }
        }
        if max_gates == 0 {
            return Err(DeviceError::NonPositive("max_gates"));
        }
        Ok(DeviceProfile {
            duration_1q,
            duration_cx,
            coherence_time,
            max_gates,
        })
    }

    /// 130 ns single-qubit gates, 650 ns CNOT, 100 us coherence, 80 gates.
    pub fn ibmqe() -> Self {
        DeviceProfile {
            duration_1q: 130e-9,
            duration_cx: 650e-9,
            coherence_time: 100e-6,
            max_gates: 80,
        }
    }
}

impl Default for DeviceProfile {
    fn default() -> Self {
        DeviceProfile::ibmqe()
    }
}

/// Serial execution time of a circuit on a device.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DurationEstimate {
    pub seconds: f64,
    pub exceeds_coherence: bool,
    /// Warning only: the simulator has no gate budget.
    pub exceeds_gate_budget: bool,
}

/// Sums per-gate durations; gates run one after another, barriers and
/// measurements take no time.
pub fn estimate_duration(circuit: &Circuit, profile: &DeviceProfile) -> DurationEstimate {
    let seconds = circuit
        .gates()
        .iter()
        .map(|g| gate_duration(g, profile))
        .sum::<f64>();
    DurationEstimate {
        seconds,
        exceeds_coherence: seconds > profile.coherence_time,
        exceeds_gate_budget: circuit.op_count() > profile.max_gates,
    }
}

fn gate_duration(gate: &Gate, profile: &DeviceProfile) -> f64 {
    match gate {
        Gate::Barrier(_) | Gate::Measure { .. } => 0.0,
        Gate::CX { .. } => profile.duration_cx,
        _ => profile.duration_1q,
    }
}

/// One CNOT that the coupling map does not permit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CouplingViolation {
    pub gate_index: usize,
    pub control: usize,
    pub target: usize,
}

pub fn validate_coupling(circuit: &Circuit, map: &CouplingMap) -> Vec<CouplingViolation> {
    circuit
        .gates()
        .iter()
        .enumerate()
        .filter_map(|(i, g)| match g {
            Gate::CX { control, target } if !map.allows(*control, *target) => Some(CouplingViolation {
                gate_index: i,
                control: *control,
                target: *target,
            }),
            _ => None,
        })
        .collect()
}

/// `[[m,k,d]]` parameters of a quantum error-correcting code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeSpec {
    pub m: usize,
    pub k: usize,
    pub d: usize,
}

impl CodeSpec {
    pub fn new(m: usize, k: usize, d: usize) -> Option<Self> {
        (k < m && d >= 1).then_some(CodeSpec { m, k, d })
    }
}

impl fmt::Display for CodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{},{}]]", self.m, self.k, self.d)
    }
}

/// On-disk form of a device: connectivity plus timings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviceDocument {
    pub num_qubits: usize,
    pub allowed: Vec<[usize; 2]>,
    pub duration_1q_ns: f64,
    pub duration_cx_ns: f64,
    pub coherence_us: f64,
    pub max_gates: usize,
}

/// A named device: coupling map and timing profile together.
#[derive(Debug, Clone, PartialEq)]
pub struct Device {
    pub coupling: CouplingMap,
    pub profile: DeviceProfile,
}

impl Device {
    pub fn builtin(name: &str) -> Result<Self, DeviceError> {
        let coupling = match name {
            "ibmqe-v1" => CouplingMap::ibmqe_v1(),
            "ibmqe-v2" => CouplingMap::ibmqe_v2(),
            other => return Err(DeviceError::UnknownProfile(other.to_string())),
        };
        Ok(Device {
            coupling,
            profile: DeviceProfile::ibmqe(),
        })
    }

    pub fn from_document(doc: &DeviceDocument) -> Result<Self, DeviceError> {
        let coupling = CouplingMap::new(doc.num_qubits, doc.allowed.iter().map(|p| (p[0], p[1])))?;
        let profile = DeviceProfile::new(
            doc.duration_1q_ns * 1e-9,
            doc.duration_cx_ns * 1e-9,
            doc.coherence_us * 1e-6,
            doc.max_gates,
        )?;
        Ok(Device { coupling, profile })
    }

    pub fn from_json(text: &str) -> Result<Self, DeviceError> {
        let doc: DeviceDocument =
            serde_json::from_str(text).map_err(|e| DeviceError::Parse(e.to_string()))?;
        Device::from_document(&doc)
    }

    /// A built-in profile name or a path to a JSON device document.
    pub fn load(name_or_path: &str) -> Result<Self, DeviceError> {
        if let Ok(dev) = Device::builtin(name_or_path) {
            return Ok(dev);
        }
        let path = Path::new(name_or_path);
        if !path.exists() {
            return Err(DeviceError::UnknownProfile(name_or_path.to_string()));
        }
        let text = std::fs::read_to_string(path).map_err(|e| DeviceError::Io(e.to_string()))?;
        Device::from_json(&text)
    }

    pub fn to_document(&self) -> DeviceDocument {
        DeviceDocument {
            num_qubits: self.coupling.num_qubits(),
            allowed: self.coupling.pairs().map(|(c, t)| [c, t]).collect(),
            duration_1q_ns: self.profile.duration_1q * 1e9,
            duration_cx_ns: self.profile.duration_cx * 1e9,
            coherence_us: self.profile.coherence_time * 1e6,
            max_gates: self.profile.max_gates,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn append_to_empty_circuit() {
        let mut c = Circuit::new(1, 1);
        c.append(Gate::X(0)).unwrap();
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn cx_self_pair_rejected() {
        let mut c = Circuit::new(2, 0);
        assert_eq!(c.append(Gate::cx(0, 0)).unwrap_err(), CircuitError::SelfPair(0));
    }

    #[test]
    fn measure_last_register_slot() {
        let mut c = Circuit::new(5, 5);
        c.append(Gate::measure(4, 4)).unwrap();
        assert_eq!(c.measurements(), vec![(4, 4)]);
    }

    #[test]
    fn out_of_range_indices() {
        let mut c = Circuit::new(2, 1);
        assert!(matches!(
            c.append(Gate::H(2)),
            Err(CircuitError::QubitOutOfRange { index: 2, size: 2 })
        ));
        assert!(matches!(
            c.append(Gate::measure(0, 1)),
            Err(CircuitError::ClbitOutOfRange { index: 1, size: 1 })
        ));
        assert!(c.append(Gate::u1(0, f64::NAN)).is_err());
        assert!(c.is_empty());
    }

    #[test]
    fn gates_after_measure_rejected() {
        let mut c = Circuit::new(2, 2);
        c.append(Gate::measure(0, 0)).unwrap();
        assert_eq!(c.append(Gate::H(0)).unwrap_err(), CircuitError::AfterMeasure(0));
        assert_eq!(c.append(Gate::cx(1, 0)).unwrap_err(), CircuitError::AfterMeasure(0));
        c.append(Gate::H(1)).unwrap();
        c.append(Gate::Barrier(vec![0, 1])).unwrap();
    }

    #[test]
    fn star_map_directions() {
        let map = CouplingMap::ibmqe_v1();
        let mut c = Circuit::new(5, 0);
        c.append(Gate::cx(1, 2)).unwrap();
        assert!(validate_coupling(&c, &map).is_empty());

        let mut rev = Circuit::new(5, 0);
        rev.append(Gate::cx(2, 1)).unwrap();
        assert_eq!(validate_coupling(&rev, &map).len(), 1);

        let mut none = Circuit::new(5, 0);
        none.extend([Gate::H(0), Gate::X(3)]).unwrap();
        assert!(validate_coupling(&none, &map).is_empty());
    }

    #[test]
    fn v2_adds_two_pairs() {
        let v1 = CouplingMap::ibmqe_v1();
        let v2 = CouplingMap::ibmqe_v2();
        assert!(!v1.allows(0, 1) && v2.allows(0, 1));
        assert!(!v1.allows(3, 4) && v2.allows(3, 4));
        assert_eq!(v2.pairs().count(), 6);
    }

    #[test]
    fn coupling_map_rejects_bad_pairs() {
        assert_eq!(CouplingMap::new(3, [(1, 1)]).unwrap_err(), DeviceError::SelfPair(1));
        assert!(CouplingMap::new(3, [(0, 3)]).is_err());
    }

    #[test]
    fn star_paths_go_through_hub() {
        let map = CouplingMap::ibmqe_v1();
        assert_eq!(map.shortest_path(0, 1), Some(vec![0, 2, 1]));
        assert_eq!(map.shortest_path(3, 2), Some(vec![3, 2]));
        let split = CouplingMap::new(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(split.shortest_path(0, 3), None);
    }

    #[test]
    fn duration_of_empty_and_cx_runs() {
        let p = DeviceProfile::ibmqe();
        assert_eq!(estimate_duration(&Circuit::new(2, 0), &p).seconds, 0.0);

        let mut c = Circuit::new(2, 2);
        for _ in 0..12 {
            c.append(Gate::cx(0, 1)).unwrap();
        }
        c.append(Gate::Barrier(vec![0, 1])).unwrap();
        c.measure_all().unwrap();
        let est = estimate_duration(&c, &p);
        assert!((est.seconds - 7.8e-6).abs() < 1e-15);
        assert!(!est.exceeds_coherence);
        assert!(!est.exceeds_gate_budget);
    }

    #[test]
    fn gate_budget_is_a_warning() {
        let mut c = Circuit::new(1, 0);
        for _ in 0..81 {
            c.append(Gate::H(0)).unwrap();
        }
        assert!(estimate_duration(&c, &DeviceProfile::ibmqe()).exceeds_gate_budget);
    }

    #[test]
    fn device_profile_requires_positive_values() {
        assert!(DeviceProfile::new(0.0, 1.0, 1.0, 1).is_err());
        assert!(DeviceProfile::new(1.0, 1.0, 1.0, 0).is_err());
        assert!(DeviceProfile::new(1.0, 1.0, 1.0, 1).is_ok());
    }

    #[test]
    fn device_json_round_trip() {
        let text = r#"{"num_qubits": 5, "allowed": [[0,2],[1,2],[3,2],[4,2]],
            "duration_1q_ns": 130, "duration_cx_ns": 650, "coherence_us": 100, "max_gates": 80}"#;
        let dev = Device::from_json(text).unwrap();
        assert_eq!(dev.coupling, CouplingMap::ibmqe_v1());
        assert!((dev.profile.duration_cx - 650e-9).abs() < 1e-18);
        let again = Device::from_json(&serde_json::to_string(&dev.to_document()).unwrap()).unwrap();
        assert_eq!(again.coupling, dev.coupling);
        assert!(Device::from_json(r#"{"num_qubits": 2}"#).is_err());
        assert_eq!(Device::builtin("ibmqe-v2").unwrap().coupling, CouplingMap::ibmqe_v2());
        assert!(Device::builtin("nope").is_err());
    }

    #[test]
    fn code_spec_invariants() {
        assert!(CodeSpec::new(5, 1, 3).is_some());
        assert!(CodeSpec::new(1, 1, 1).is_none());
        assert!(CodeSpec::new(5, 1, 0).is_none());
        assert_eq!(CodeSpec::new(5, 1, 2).unwrap().to_string(), "[[5,1,2]]");
    }
}
