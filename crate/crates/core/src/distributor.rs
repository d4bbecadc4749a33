//! Telegate distribution: splits a partitioned circuit into per-part
//! subcircuits and records every cut gate as a non-local operation.

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, Gate, GateCounts, RemoteKind, TelegateTag};
use crate::partitioner::Partition;

#[derive(Debug, Error, PartialEq)]
pub enum DistributeError {
    #[error("input circuit already contains telegate markers")]
    MarkerPresent,
    #[error("partition covers {partition} qubits but the circuit has {circuit}")]
    WidthMismatch { circuit: usize, partition: usize },
    #[error("part {0} has no qubits")]
    EmptyPart(usize),
    #[error("subcircuit {part}: {reason}")]
    Corrupt { part: usize, reason: String },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

/// Gate executed across parts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Telegate {
    /// The cut gate on global qubits.
    pub gate: Gate,
    /// Parts touched, ascending.
    pub parts: SmallVec<[usize; 3]>,
    /// Index of the gate in the source circuit.
    pub position: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Subcircuit {
    circuit: Circuit,
    /// Global qubit of each local index, ascending.
    local_to_global: Vec<usize>,
    /// Source index of each gate; dropped once the gate list is rewritten.
    positions: Option<Vec<usize>>,
}

impl Subcircuit {
    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn local_to_global(&self) -> &[usize] {
        &self.local_to_global
    }

    pub fn global(&self, local: usize) -> usize {
        self.local_to_global[local]
    }

    fn markers(&self) -> impl Iterator<Item = TelegateTag> + '_ {
        self.circuit.gates().iter().filter_map(|g| match g.kind {
            crate::circuit::GateKind::Telegate(tag) => Some(tag),
            _ => None,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DistributedCircuit {
    id: String,
    width: usize,
    subcircuits: Vec<Subcircuit>,
    telegates: Vec<Telegate>,
}

/// Aggregate metrics of a distributed circuit; counts exclude markers.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributedMetrics {
    pub counts: GateCounts,
    pub depth_max: usize,
    pub depth_mean: f64,
    pub depth_max_without_markers: usize,
    pub depth_mean_without_markers: f64,
    pub n_nonlocal: usize,
}

impl DistributedCircuit {
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn k(&self) -> usize {
        self.subcircuits.len()
    }

    pub fn subcircuits(&self) -> &[Subcircuit] {
        &self.subcircuits
    }

    pub fn telegates(&self) -> &[Telegate] {
        &self.telegates
    }

    /// Rewrites every subcircuit with `f` (e.g. local optimisation). The
    /// rewrite must keep the local width and the marker sequence intact.
    pub fn map_subcircuits(
        &self,
        mut f: impl FnMut(&Circuit) -> Circuit,
    ) -> Result<DistributedCircuit, DistributeError> {
        let mut subcircuits = Vec::with_capacity(self.k());
        for (part, sub) in self.subcircuits.iter().enumerate() {
            let circuit = f(&sub.circuit);
            let rewritten = Subcircuit {
                circuit,
                local_to_global: sub.local_to_global.clone(),
                positions: None,
            };
            if rewritten.circuit.width() != sub.circuit.width() {
                return Err(DistributeError::Corrupt { part, reason: "local width changed".into() });
            }
            if !rewritten.markers().eq(sub.markers()) {
                return Err(DistributeError::Corrupt { part, reason: "marker sequence changed".into() });
            }
            let unchanged = rewritten.circuit.gates() == sub.circuit.gates();
            subcircuits.push(if unchanged { sub.clone() } else { rewritten });
        }
        Ok(DistributedCircuit { subcircuits, ..self.clone() })
    }
}

/// Splits `c` along `p`. Local gates are copied, reindexed, into their part
/// in source order; each cut gate yields one telegate record and one marker
/// per touched part on that part's participating qubits.
pub fn distribute(c: &Circuit, p: &Partition) -> Result<DistributedCircuit, DistributeError> {
    if c.has_markers() {
        return Err(DistributeError::MarkerPresent);
    }
    if p.vertex_count() != c.width() {
        return Err(DistributeError::WidthMismatch { circuit: c.width(), partition: p.vertex_count() });
    }
    let k = p.k();
    let members: Vec<Vec<usize>> = (0..k).map(|part| p.members(part)).collect();
    if let Some(empty) = members.iter().position(|m| m.is_empty()) {
        return Err(DistributeError::EmptyPart(empty));
    }
    let mut local = vec![0usize; c.width()];
    for m in &members {
        for (i, &q) in m.iter().enumerate() {
            local[q] = i;
        }
    }

    let mut gates: Vec<Vec<Gate>> = vec![Vec::new(); k];
    let mut positions: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut telegates = Vec::new();
    for (position, g) in c.gates().iter().enumerate() {
        let mut parts: SmallVec<[usize; 3]> = g.qubits.iter().map(|&q| p.part_of(q)).collect();
        parts.sort_unstable();
        parts.dedup();
        if parts.len() == 1 {
            let part = parts[0];
            let qubits: SmallVec<[usize; 3]> = g.qubits.iter().map(|&q| local[q]).collect();
            gates[part].push(Gate::new(g.kind, &qubits, &g.params));
            positions[part].push(position);
            continue;
        }
        let original = RemoteKind::try_from(g.kind).expect("only multi-qubit gates can be cut");
        let tag = TelegateTag { original, record: telegates.len() as u32 };
        for &part in &parts {
            let qubits: SmallVec<[usize; 3]> =
                g.qubits.iter().filter(|&&q| p.part_of(q) == part).map(|&q| local[q]).collect();
            gates[part].push(Gate::marker(tag, &qubits));
            positions[part].push(position);
        }
        telegates.push(Telegate { gate: g.clone(), parts, position });
    }

    let subcircuits = members
        .into_iter()
        .zip(gates)
        .zip(positions)
        .enumerate()
        .map(|(part, ((m, gs), pos))| {
            let circuit = Circuit::new(format!("{}/p{part}", c.id()), m.len(), gs)?;
            Ok(Subcircuit { circuit, local_to_global: m, positions: Some(pos) })
        })
        .collect::<Result<Vec<_>, DistributeError>>()?;
    Ok(DistributedCircuit { id: c.id().to_string(), width: c.width(), subcircuits, telegates })
}

fn mean(values: impl ExactSizeIterator<Item = usize>) -> f64 {
    let n = values.len();
    if n == 0 {
        return 0.0;
    }
    values.sum::<usize>() as f64 / n as f64
}

pub fn distributed_metrics(d: &DistributedCircuit) -> DistributedMetrics {
    let subs = || d.subcircuits.iter().map(|s| &s.circuit);
    let mut counts = subs().fold(GateCounts::default(), |acc, c| acc + c.gate_counts());
    let markers = counts.markers;
    counts.markers = 0;
    debug_assert!(markers >= d.telegates.len());
    DistributedMetrics {
        counts,
        depth_max: subs().map(Circuit::depth).max().unwrap_or(0),
        depth_mean: mean(subs().map(Circuit::depth)),
        depth_max_without_markers: subs().map(Circuit::depth_without_markers).max().unwrap_or(0),
        depth_mean_without_markers: mean(subs().map(Circuit::depth_without_markers)),
        n_nonlocal: d.telegates.len(),
    }
}

fn to_global(sub: &Subcircuit, g: &Gate) -> Gate {
    let qubits: SmallVec<[usize; 3]> = g.qubits.iter().map(|&q| sub.global(q)).collect();
    Gate::new(g.kind, &qubits, &g.params)
}

/// Rebuilds a monolithic circuit on global qubits, replacing each group of
/// markers by its telegate's original gate. Untouched subcircuits are merged
/// by source position, which reproduces the source exactly; rewritten ones
/// are merged around their markers, which preserves the unitary.
pub fn reassemble(d: &DistributedCircuit) -> Result<Circuit, DistributeError> {
    let gates = if d.subcircuits.iter().all(|s| s.positions.is_some()) {
        merge_by_position(d)
    } else {
        merge_by_markers(d)?
    };
    Ok(Circuit::new(d.id.clone(), d.width, gates)?)
}

fn merge_by_position(d: &DistributedCircuit) -> Vec<Gate> {
    let mut tagged: Vec<(usize, Gate)> = Vec::new();
    for sub in &d.subcircuits {
        let pos = sub.positions.as_ref().unwrap();
        for (g, &at) in sub.circuit.gates().iter().zip(pos) {
            if !g.is_marker() {
                tagged.push((at, to_global(sub, g)));
            }
        }
    }
    tagged.extend(d.telegates.iter().map(|t| (t.position, t.gate.clone())));
    tagged.sort_by_key(|(at, _)| *at);
    tagged.into_iter().map(|(_, g)| g).collect()
}

fn merge_by_markers(d: &DistributedCircuit) -> Result<Vec<Gate>, DistributeError> {
    let mut out = Vec::new();
    let mut cursor = vec![0usize; d.k()];
    let flush = |part: usize, until: Option<u32>, cursor: &mut [usize], out: &mut Vec<Gate>| {
        let sub = &d.subcircuits[part];
        let gates = sub.circuit.gates();
        while cursor[part] < gates.len() {
            let g = &gates[cursor[part]];
            cursor[part] += 1;
            if let crate::circuit::GateKind::Telegate(tag) = g.kind {
                return match until {
                    Some(record) if tag.record == record => Ok(()),
                    _ => Err(DistributeError::Corrupt {
                        part,
                        reason: format!("unexpected marker for telegate {}", tag.record),
                    }),
                };
            }
            out.push(to_global(sub, g));
        }
        match until {
            None => Ok(()),
            Some(record) => Err(DistributeError::Corrupt { part, reason: format!("missing marker for telegate {record}") }),
        }
    };
    for (record, t) in d.telegates.iter().enumerate() {
        for &part in &t.parts {
            flush(part, Some(record as u32), &mut cursor, &mut out)?;
        }
        out.push(t.gate.clone());
    }
    for part in 0..d.k() {
        flush(part, None, &mut cursor, &mut out)?;
    }
    Ok(out)
}
