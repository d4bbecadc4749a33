use crate::circuit::{Circuit, Gate, GateKind};
use crate::optimizer::PassReport;

/// How a gate acts on one of its qubits: through a function of Z, of X, or
/// neither. Two gates commute when they agree on every shared qubit.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Role {
    Z,
    X,
    Other,
}

fn role(g: &Gate, q: usize) -> Role {
    use GateKind::*;
    match g.kind {
        Cx => {
            if g.qubits[0] == q {
                Role::Z
            } else {
                Role::X
            }
        }
        Ccx => {
            if g.qubits[2] == q {
                Role::X
            } else {
                Role::Z
            }
        }
        Cz => Role::Z,
        k if k.is_diagonal() => Role::Z,
        k if k.is_x_axis() => Role::X,
        _ => Role::Other,
    }
}

/// Sound (not complete) commutation check. Diagonal gates commute through
/// CX/CCX controls and CZ; X-axis gates through CX/CCX targets; controlled
/// gates sharing only controls (or only targets) commute. Markers commute
/// with nothing that shares a qubit.
pub fn commutes(a: &Gate, b: &Gate) -> bool {
    let shared: Vec<usize> = a.qubits.iter().copied().filter(|q| b.acts_on(*q)).collect();
    if shared.is_empty() {
        return true;
    }
    if a.is_marker() || b.is_marker() {
        return false;
    }
    if a.kind == GateKind::I || b.kind == GateKind::I || a == b {
        return true;
    }
    shared.iter().all(|&q| {
        let r = role(a, q);
        r != Role::Other && r == role(b, q)
    })
}

/// Removes inverse pairs that are separated only by gates commuting with
/// them.
pub fn commutative_cancellation(c: &Circuit) -> (Circuit, PassReport) {
    let mut current = c.clone();
    let mut sweeps = 0;
    loop {
        sweeps += 1;
        let (gates, changed) = sweep(&current);
        if !changed {
            break;
        }
        current = current.with_gates(gates).expect("rewrites keep gates valid");
    }
    let report = PassReport::new("commutative_cancellation", c, &current, sweeps);
    (current, report)
}

fn sweep(c: &Circuit) -> (Vec<Gate>, bool) {
    let gates = c.gates();
    let mut wires: Vec<Vec<usize>> = vec![Vec::new(); c.width()];
    // slot[i][k]: position of gate i within the wire of its k-th qubit
    let mut slot: Vec<[usize; 3]> = vec![[0; 3]; gates.len()];
    for (i, g) in gates.iter().enumerate() {
        for (k, &q) in g.qubits.iter().enumerate() {
            slot[i][k] = wires[q].len();
            wires[q].push(i);
        }
    }
    let mut alive = vec![true; gates.len()];
    let mut changed = false;
    for i in 0..gates.len() {
        let g = &gates[i];
        if !alive[i] || g.is_marker() {
            continue;
        }
        let mut cursor: [usize; 3] = [0; 3];
        for k in 0..g.arity() {
            cursor[k] = slot[i][k] + 1;
        }
        loop {
            // next live gate, in program order, on any of g's wires
            let mut next: Option<usize> = None;
            for k in 0..g.arity() {
                let wire = &wires[g.qubits[k]];
                while cursor[k] < wire.len() && !alive[wire[cursor[k]]] {
                    cursor[k] += 1;
                }
                if let Some(&j) = wire.get(cursor[k]) {
                    next = Some(next.map_or(j, |n: usize| n.min(j)));
                }
            }
            let Some(j) = next else { break };
            let h = &gates[j];
            if g.is_inverse_of(h) {
                alive[i] = false;
                alive[j] = false;
                changed = true;
                break;
            }
            if !commutes(g, h) {
                break;
            }
            for k in 0..g.arity() {
                if wires[g.qubits[k]].get(cursor[k]) == Some(&j) {
                    cursor[k] += 1;
                }
            }
        }
    }
    let out = gates
        .iter()
        .zip(&alive)
        .filter(|(_, &a)| a)
        .map(|(g, _)| g.clone())
        .collect();
    (out, changed)
}
