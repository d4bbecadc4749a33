//! Circuit representation, gate taxonomy and structural metrics.

use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::{smallvec, SmallVec};
use thiserror::Error;

use crate::linalg::{gates as mats, Matrix};
use crate::scalar::Real;

pub type Qubits = SmallVec<[usize; 3]>;
pub type Params = SmallVec<[f64; 3]>;

/// Multi-qubit gate kinds that can be cut by a partition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RemoteKind {
    Cx,
    Cz,
    Swap,
    Ccx,
}

impl From<RemoteKind> for GateKind {
    fn from(k: RemoteKind) -> Self {
        match k {
            RemoteKind::Cx => GateKind::Cx,
            RemoteKind::Cz => GateKind::Cz,
            RemoteKind::Swap => GateKind::Swap,
            RemoteKind::Ccx => GateKind::Ccx,
        }
    }
}

impl TryFrom<GateKind> for RemoteKind {
    type Error = GateKind;

    fn try_from(k: GateKind) -> Result<Self, GateKind> {
        match k {
            GateKind::Cx => Ok(RemoteKind::Cx),
            GateKind::Cz => Ok(RemoteKind::Cz),
            GateKind::Swap => Ok(RemoteKind::Swap),
            GateKind::Ccx => Ok(RemoteKind::Ccx),
            other => Err(other),
        }
    }
}

/// Payload of a telegate marker: which kind of gate was cut and the index of
/// the telegate record that owns it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TelegateTag {
    pub original: RemoteKind,
    pub record: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    I,
    X,
    Y,
    Z,
    H,
    S,
    Sdg,
    T,
    Tdg,
    Rx,
    Ry,
    Rz,
    U3,
    Cx,
    Cz,
    Swap,
    Ccx,
    /// Local placeholder for a gate executed through inter-QPU communication.
    /// Opaque to every optimisation pass.
    Telegate(TelegateTag),
}

impl GateKind {
    /// Fixed qubit count. Markers have none: they sit on however many local
    /// qubits the cut gate touches in their subcircuit (1 or 2).
    pub fn fixed_arity(self) -> Option<usize> {
        use GateKind::*;
        match self {
            I | X | Y | Z | H | S | Sdg | T | Tdg | Rx | Ry | Rz | U3 => Some(1),
            Cx | Cz | Swap => Some(2),
            Ccx => Some(3),
            Telegate(_) => None,
        }
    }

    pub fn param_count(self) -> usize {
        match self {
            GateKind::Rx | GateKind::Ry | GateKind::Rz => 1,
            GateKind::U3 => 3,
            _ => 0,
        }
    }

    pub fn is_marker(self) -> bool {
        matches!(self, GateKind::Telegate(_))
    }

    /// Lowercase OpenQASM 2 name. Markers have no QASM spelling.
    pub fn qasm_name(self) -> Option<&'static str> {
        use GateKind::*;
        Some(match self {
            I => "id",
            X => "x",
            Y => "y",
            Z => "z",
            H => "h",
            S => "s",
            Sdg => "sdg",
            T => "t",
            Tdg => "tdg",
            Rx => "rx",
            Ry => "ry",
            Rz => "rz",
            U3 => "u3",
            Cx => "cx",
            Cz => "cz",
            Swap => "swap",
            Ccx => "ccx",
            Telegate(_) => return None,
        })
    }

    pub fn from_qasm_name(name: &str) -> Option<GateKind> {
        use GateKind::*;
        Some(match name {
            "id" => I,
            "x" => X,
            "y" => Y,
            "z" => Z,
            "h" => H,
            "s" => S,
            "sdg" => Sdg,
            "t" => T,
            "tdg" => Tdg,
            "rx" => Rx,
            "ry" => Ry,
            "rz" => Rz,
            "u3" => U3,
            "cx" => Cx,
            "cz" => Cz,
            "swap" => Swap,
            "ccx" => Ccx,
            _ => return None,
        })
    }

    /// Diagonal in the computational basis (commutes with Z-type structure).
    pub fn is_diagonal(self) -> bool {
        use GateKind::*;
        matches!(self, I | Z | S | Sdg | T | Tdg | Rz | Cz)
    }

    /// Single-qubit gates diagonal in the X basis.
    pub fn is_x_axis(self) -> bool {
        matches!(self, GateKind::I | GateKind::X | GateKind::Rx)
    }

    pub fn is_rotation(self) -> bool {
        matches!(self, GateKind::Rx | GateKind::Ry | GateKind::Rz)
    }

    /// Gates whose qubit order does not matter.
    pub fn is_symmetric(self) -> bool {
        matches!(self, GateKind::Cz | GateKind::Swap)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.qasm_name() {
            Some(n) => f.write_str(n),
            None => f.write_str("telegate"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub kind: GateKind,
    pub qubits: Qubits,
    pub params: Params,
}

impl Gate {
    pub fn new(kind: GateKind, qubits: &[usize], params: &[f64]) -> Self {
        Gate {
            kind,
            qubits: SmallVec::from_slice(qubits),
            params: SmallVec::from_slice(params),
        }
    }

    fn one(kind: GateKind, q: usize) -> Self {
        Gate { kind, qubits: smallvec![q], params: SmallVec::new() }
    }

    pub fn id(q: usize) -> Self {
        Self::one(GateKind::I, q)
    }
    pub fn x(q: usize) -> Self {
        Self::one(GateKind::X, q)
    }
    pub fn y(q: usize) -> Self {
        Self::one(GateKind::Y, q)
    }
    pub fn z(q: usize) -> Self {
        Self::one(GateKind::Z, q)
    }
    pub fn h(q: usize) -> Self {
        Self::one(GateKind::H, q)
    }
    pub fn s(q: usize) -> Self {
        Self::one(GateKind::S, q)
    }
    pub fn sdg(q: usize) -> Self {
        Self::one(GateKind::Sdg, q)
    }
    pub fn t(q: usize) -> Self {
        Self::one(GateKind::T, q)
    }
    pub fn tdg(q: usize) -> Self {
        Self::one(GateKind::Tdg, q)
    }
    pub fn rx(theta: f64, q: usize) -> Self {
        Gate::new(GateKind::Rx, &[q], &[theta])
    }
    pub fn ry(theta: f64, q: usize) -> Self {
        Gate::new(GateKind::Ry, &[q], &[theta])
    }
    pub fn rz(theta: f64, q: usize) -> Self {
        Gate::new(GateKind::Rz, &[q], &[theta])
    }
    pub fn u3(theta: f64, phi: f64, lambda: f64, q: usize) -> Self {
        Gate::new(GateKind::U3, &[q], &[theta, phi, lambda])
    }
    pub fn cx(control: usize, target: usize) -> Self {
        Gate::new(GateKind::Cx, &[control, target], &[])
    }
    pub fn cz(a: usize, b: usize) -> Self {
        Gate::new(GateKind::Cz, &[a, b], &[])
    }
    pub fn swap(a: usize, b: usize) -> Self {
        Gate::new(GateKind::Swap, &[a, b], &[])
    }
    pub fn ccx(c0: usize, c1: usize, target: usize) -> Self {
        Gate::new(GateKind::Ccx, &[c0, c1, target], &[])
    }
    pub fn marker(tag: TelegateTag, local_qubits: &[usize]) -> Self {
        Gate::new(GateKind::Telegate(tag), local_qubits, &[])
    }

    pub fn arity(&self) -> usize {
        self.qubits.len()
    }

    pub fn is_marker(&self) -> bool {
        self.kind.is_marker()
    }

    pub fn acts_on(&self, q: usize) -> bool {
        self.qubits.contains(&q)
    }

    /// Same support, respecting qubit roles (controls of CCX and both
    /// qubits of symmetric gates may be listed in either order).
    pub fn same_support(&self, other: &Gate) -> bool {
        if self.qubits.len() != other.qubits.len() {
            return false;
        }
        if self.qubits == other.qubits {
            return true;
        }
        match self.kind {
            GateKind::Cz | GateKind::Swap => {
                self.qubits[0] == other.qubits[1] && self.qubits[1] == other.qubits[0]
            }
            GateKind::Ccx => {
                self.qubits[2] == other.qubits[2]
                    && self.qubits[0] == other.qubits[1]
                    && self.qubits[1] == other.qubits[0]
            }
            _ => false,
        }
    }

    /// The exact inverse of this gate, when it is expressible in the gate set.
    pub fn inverse(&self) -> Option<Gate> {
        use GateKind::*;
        let kind = match self.kind {
            I | X | Y | Z | H | Cx | Cz | Swap | Ccx => self.kind,
            S => Sdg,
            Sdg => S,
            T => Tdg,
            Tdg => T,
            Rx | Ry | Rz => {
                return Some(Gate::new(self.kind, &self.qubits, &[-self.params[0]]));
            }
            U3 => {
                let p = &self.params;
                return Some(Gate::new(U3, &self.qubits, &[-p[0], -p[2], -p[1]]));
            }
            Telegate(_) => return None,
        };
        Some(Gate { kind, qubits: self.qubits.clone(), params: SmallVec::new() })
    }

    /// True when `other` undoes `self` up to global phase (rotation angles
    /// compared modulo 2pi).
    pub fn is_inverse_of(&self, other: &Gate) -> bool {
        if self.is_marker() || other.is_marker() || !self.same_support(other) {
            return false;
        }
        use GateKind::*;
        match (self.kind, other.kind) {
            (Rx, Rx) | (Ry, Ry) | (Rz, Rz) => {
                crate::scalar::normalize_angle(self.params[0] + other.params[0]).abs() < 1e-12
            }
            (U3, U3) => {
                let inv = self.inverse().unwrap();
                inv.params
                    .iter()
                    .zip(&other.params)
                    .all(|(a, b)| crate::scalar::normalize_angle(a - b).abs() < 1e-12)
            }
            (a, b) => match self.inverse() {
                Some(inv) => inv.kind == b && a.param_count() == 0,
                None => false,
            },
        }
    }

    /// 2x2 matrix for single-qubit gates.
    pub fn matrix_1q<R: Real>(&self) -> Option<Matrix<R, 2>> {
        use GateKind::*;
        let p = |i: usize| R::lit(self.params[i]);
        let quarter = R::FRAC_PI_4();
        let half = R::FRAC_PI_2();
        Some(match self.kind {
            I => Matrix::identity(),
            X => mats::pauli_x(),
            Y => mats::pauli_y(),
            Z => mats::pauli_z(),
            H => mats::hadamard(),
            S => mats::phase(half),
            Sdg => mats::phase(-half),
            T => mats::phase(quarter),
            Tdg => mats::phase(-quarter),
            Rx => mats::rx(p(0)),
            Ry => mats::ry(p(0)),
            Rz => mats::rz(p(0)),
            U3 => mats::u3(p(0), p(1), p(2)),
            _ => return None,
        })
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        if !self.params.is_empty() {
            let ps: Vec<String> = self.params.iter().map(|p| format!("{p}")).collect();
            write!(f, "({})", ps.join(","))?;
        }
        let qs: Vec<String> = self.qubits.iter().map(|q| q.to_string()).collect();
        write!(f, " {}", qs.join(","))
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircuitError {
    #[error("circuit width must be at least 1")]
    ZeroWidth,
    #[error("gate {index} ({kind}) uses qubit {qubit} outside a register of width {width}")]
    QubitOutOfRange { index: usize, kind: GateKind, qubit: usize, width: usize },
    #[error("gate {index} ({kind}) repeats qubit {qubit}")]
    DuplicateQubit { index: usize, kind: GateKind, qubit: usize },
    #[error("gate {index} ({kind}) has {got} qubits")]
    Arity { index: usize, kind: GateKind, got: usize },
    #[error("gate {index} ({kind}) has {got} parameters, expected {expected}")]
    ParamCount { index: usize, kind: GateKind, got: usize, expected: usize },
}

/// Ordered gate list over a fixed register. Immutable once built; rewrites
/// produce new circuits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    id: String,
    width: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(id: impl Into<String>, width: usize, gates: Vec<Gate>) -> Result<Self, CircuitError> {
        if width == 0 {
            return Err(CircuitError::ZeroWidth);
        }
        for (index, g) in gates.iter().enumerate() {
            validate_gate(index, g, width)?;
        }
        Ok(Circuit { id: id.into(), width, gates })
    }

    pub fn empty(id: impl Into<String>, width: usize) -> Result<Self, CircuitError> {
        Self::new(id, width, Vec::new())
    }

    /// Same register and id, new gate list.
    pub fn with_gates(&self, gates: Vec<Gate>) -> Result<Self, CircuitError> {
        Circuit::new(self.id.clone(), self.width, gates)
    }

    pub fn with_id(&self, id: impl Into<String>) -> Self {
        Circuit { id: id.into(), ..self.clone() }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn width(&self) -> usize {
        self.width
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

    pub fn into_gates(self) -> Vec<Gate> {
        self.gates
    }

    pub fn has_markers(&self) -> bool {
        self.gates.iter().any(Gate::is_marker)
    }

    /// Longest chain of gates sharing qubits. Markers occupy one layer on
    /// each local qubit they touch.
    pub fn depth(&self) -> usize {
        depth_of(self.width, self.gates.iter())
    }

    /// Depth with markers ignored entirely.
    pub fn depth_without_markers(&self) -> usize {
        depth_of(self.width, self.gates.iter().filter(|g| !g.is_marker()))
    }

    pub fn gate_counts(&self) -> GateCounts {
        let mut counts = GateCounts::default();
        for g in &self.gates {
            counts.add(g);
        }
        counts
    }

    /// Per-qubit gate counts; handy for depth lower bounds.
    pub fn qubit_loads(&self) -> Vec<usize> {
        let mut load = vec![0; self.width];
        for g in &self.gates {
            for &q in &g.qubits {
                load[q] += 1;
            }
        }
        load
    }
}

fn depth_of<'a>(width: usize, gates: impl Iterator<Item = &'a Gate>) -> usize {
    let mut frontier = vec![0usize; width];
    let mut depth = 0;
    for g in gates {
        let layer = g.qubits.iter().map(|&q| frontier[q]).max().unwrap_or(0) + 1;
        for &q in &g.qubits {
            frontier[q] = layer;
        }
        depth = depth.max(layer);
    }
    depth
}

fn validate_gate(index: usize, g: &Gate, width: usize) -> Result<(), CircuitError> {
    let kind = g.kind;
    let arity_ok = match kind.fixed_arity() {
        Some(a) => g.qubits.len() == a,
        None => (1..=2).contains(&g.qubits.len()),
    };
    if !arity_ok {
        return Err(CircuitError::Arity { index, kind, got: g.qubits.len() });
    }
    if g.params.len() != kind.param_count() {
        return Err(CircuitError::ParamCount {
            index,
            kind,
            got: g.params.len(),
            expected: kind.param_count(),
        });
    }
    for (i, &q) in g.qubits.iter().enumerate() {
        if q >= width {
            return Err(CircuitError::QubitOutOfRange { index, kind, qubit: q, width });
        }
        if g.qubits[..i].contains(&q) {
            return Err(CircuitError::DuplicateQubit { index, kind, qubit: q });
        }
    }
    Ok(())
}

/// Gate counts by arity class; markers are tallied separately.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCounts {
    pub one: usize,
    pub two: usize,
    pub three: usize,
    pub markers: usize,
}

impl GateCounts {
    pub fn add(&mut self, g: &Gate) {
        if g.is_marker() {
            self.markers += 1;
            return;
        }
        match g.arity() {
            1 => self.one += 1,
            2 => self.two += 1,
            _ => self.three += 1,
        }
    }

    /// Non-marker gates.
    pub fn total(&self) -> usize {
        self.one + self.two + self.three
    }
}

impl std::ops::Add for GateCounts {
    type Output = GateCounts;

    fn add(self, o: GateCounts) -> GateCounts {
        GateCounts {
            one: self.one + o.one,
            two: self.two + o.two,
            three: self.three + o.three,
            markers: self.markers + o.markers,
        }
    }
}

/// Full-width unitary of a single gate acting on a pair, used by block
/// accumulation. `pair` gives the register positions of the block's qubits
/// `(a, b)`; `a` is the more significant index of the 4x4 matrix.
pub(crate) fn gate_on_pair<T: Real>(g: &Gate, pair: (usize, usize)) -> Option<Matrix<T, 4>> {
    use crate::linalg::kron;
    let id = Matrix::<T, 2>::identity();
    if let Some(m) = g.matrix_1q::<T>() {
        let q = g.qubits[0];
        return if q == pair.0 {
            Some(kron(&m, &id))
        } else if q == pair.1 {
            Some(kron(&id, &m))
        } else {
            None
        };
    }
    let (q0, q1) = (*g.qubits.first()?, *g.qubits.get(1)?);
    let forward = q0 == pair.0 && q1 == pair.1;
    let backward = q0 == pair.1 && q1 == pair.0;
    if !(forward || backward) || g.arity() != 2 {
        return None;
    }
    match g.kind {
        GateKind::Cx if forward => Some(mats::cx()),
        GateKind::Cx => Some(mats::cx_reversed()),
        GateKind::Cz => Some(mats::cz()),
        GateKind::Swap => Some(mats::swap()),
        _ => None,
    }
}
