use crate::circuit::{Circuit, Gate};
use crate::optimizer::PassReport;
use crate::scalar::normalize_angle;

/// Merged rotations below this magnitude are dropped.
const ZERO_ANGLE: f64 = 1e-12;

/// Stack-of-wires rewriting: each qubit keeps the output indices of the live
/// gates on it, so the wire-adjacent predecessor of a new gate is the top
/// of its stacks.
struct Wires {
    out: Vec<Option<Gate>>,
    stacks: Vec<Vec<usize>>,
}

impl Wires {
    fn new(width: usize, capacity: usize) -> Self {
        Wires { out: Vec::with_capacity(capacity), stacks: vec![Vec::new(); width] }
    }

    /// Output index of the gate directly preceding `g` on all of its qubits.
    fn common_predecessor(&self, g: &Gate) -> Option<usize> {
        let top = *self.stacks[g.qubits[0]].last()?;
        let prev = self.out[top].as_ref()?;
        let same = prev.qubits.len() == g.qubits.len()
            && g.qubits.iter().all(|&q| self.stacks[q].last() == Some(&top));
        same.then_some(top)
    }

    fn push(&mut self, g: Gate) {
        let idx = self.out.len();
        for &q in &g.qubits {
            self.stacks[q].push(idx);
        }
        self.out.push(Some(g));
    }

    fn remove(&mut self, idx: usize) {
        if let Some(g) = self.out[idx].take() {
            for &q in &g.qubits {
                self.stacks[q].pop();
            }
        }
    }

    fn finish(self) -> Vec<Gate> {
        self.out.into_iter().flatten().collect()
    }
}

fn to_fixpoint(c: &Circuit, sweep: impl Fn(&Circuit) -> (Vec<Gate>, bool)) -> (Circuit, usize) {
    let mut current = c.clone();
    let mut sweeps = 0;
    loop {
        sweeps += 1;
        let (gates, changed) = sweep(&current);
        if !changed {
            return (current, sweeps);
        }
        current = current.with_gates(gates).expect("rewrites keep gates valid");
    }
}

/// Removes wire-adjacent pairs of mutually inverse gates on the same qubits
/// (H H, S Sdg, T Tdg, CX CX, CZ CZ, SWAP SWAP, CCX CCX, R(a) R(-a), ...).
pub fn cancel_inverse_pairs(c: &Circuit) -> (Circuit, PassReport) {
    let (out, sweeps) = to_fixpoint(c, |cur| {
        let mut w = Wires::new(cur.width(), cur.len());
        let mut changed = false;
        for g in cur.gates() {
            if let Some(top) = w.common_predecessor(g) {
                if w.out[top].as_ref().is_some_and(|p| p.is_inverse_of(g)) {
                    w.remove(top);
                    changed = true;
                    continue;
                }
            }
            w.push(g.clone());
        }
        (w.finish(), changed)
    });
    let report = PassReport::new("cancel_inverse_pairs", c, &out, sweeps);
    (out, report)
}

/// Merges wire-adjacent rotations about the same axis; the summed angle is
/// wrapped into `(-pi, pi]` and dropped when it vanishes.
pub fn merge_rotations(c: &Circuit) -> (Circuit, PassReport) {
    let (out, sweeps) = to_fixpoint(c, |cur| {
        let mut w = Wires::new(cur.width(), cur.len());
        let mut changed = false;
        for g in cur.gates() {
            if g.kind.is_rotation() {
                if let Some(top) = w.common_predecessor(g) {
                    let prev = w.out[top].as_mut().unwrap();
                    if prev.kind == g.kind {
                        changed = true;
                        let merged = normalize_angle(prev.params[0] + g.params[0]);
                        if merged.abs() < ZERO_ANGLE {
                            w.remove(top);
                        } else {
                            prev.params[0] = merged;
                        }
                        continue;
                    }
                }
            }
            w.push(g.clone());
        }
        (w.finish(), changed)
    });
    let report = PassReport::new("merge_rotations", c, &out, sweeps);
    (out, report)
}
