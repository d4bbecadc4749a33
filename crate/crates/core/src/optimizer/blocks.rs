use crate::circuit::{gate_on_pair, Circuit, Gate};
use crate::linalg::Matrix;
use crate::optimizer::kak::kak_resynthesize;
use crate::optimizer::PassReport;

/// Maximal run of gates confined to one qubit pair.
#[derive(Debug)]
struct Block {
    pair: (usize, usize),
    members: Vec<usize>,
    two_qubit: usize,
}

fn collect_blocks(c: &Circuit) -> Vec<Block> {
    let mut blocks: Vec<Block> = Vec::new();
    let mut open: Vec<Option<usize>> = vec![None; c.width()];
    let mut pending: Vec<Vec<usize>> = vec![Vec::new(); c.width()];

    fn close(open: &mut [Option<usize>], blocks: &[Block], id: Option<usize>) {
        if let Some(id) = id {
            let (a, b) = blocks[id].pair;
            for q in [a, b] {
                if open[q] == Some(id) {
                    open[q] = None;
                }
            }
        }
    }

    for (i, g) in c.gates().iter().enumerate() {
        if g.is_marker() || g.arity() > 2 {
            for &q in &g.qubits {
                let id = open[q];
                close(&mut open, &blocks, id);
                pending[q].clear();
            }
            continue;
        }
        if g.arity() == 1 {
            let q = g.qubits[0];
            match open[q] {
                Some(id) => blocks[id].members.push(i),
                None => pending[q].push(i),
            }
            continue;
        }
        let (a, b) = (g.qubits[0], g.qubits[1]);
        if open[a].is_some() && open[a] == open[b] {
            let block = &mut blocks[open[a].unwrap()];
            block.members.push(i);
            block.two_qubit += 1;
            continue;
        }
        let (ida, idb) = (open[a], open[b]);
        close(&mut open, &blocks, ida);
        close(&mut open, &blocks, idb);
        let mut members = std::mem::take(&mut pending[a]);
        members.append(&mut pending[b]);
        members.sort_unstable();
        members.push(i);
        open[a] = Some(blocks.len());
        open[b] = Some(blocks.len());
        blocks.push(Block { pair: (a, b), members, two_qubit: 1 });
    }
    blocks
}

fn remap(g: Gate, pair: (usize, usize)) -> Gate {
    let qubits: Vec<usize> = g.qubits.iter().map(|&q| if q == 0 { pair.0 } else { pair.1 }).collect();
    Gate::new(g.kind, &qubits, &g.params)
}

fn resynthesize(c: &Circuit, block: &Block) -> Option<Vec<Gate>> {
    let gates = c.gates();
    let mut u = Matrix::<f64, 4>::identity();
    for &i in &block.members {
        u = gate_on_pair::<f64>(&gates[i], block.pair)? * u;
    }
    let fresh = match kak_resynthesize(&u) {
        Ok(seq) => seq,
        Err(e) => {
            log::warn!("{}: block on {:?} left unchanged: {e}", c.id(), block.pair);
            return None;
        }
    };
    let old = (block.two_qubit, block.members.len());
    let new_two = fresh.iter().filter(|g| g.arity() == 2).count();
    let new = (new_two, fresh.len());
    let accept = new.0 <= old.0 && new.1 <= old.1 && new < old;
    accept.then(|| fresh.into_iter().map(|g| remap(g, block.pair)).collect())
}

/// Collects maximal two-qubit blocks and replaces each block holding at
/// least two two-qubit gates by its minimal-CX synthesis, when that
/// strictly lowers (two-qubit count, total count) without raising either.
pub fn collect_and_resynthesize_blocks(c: &Circuit) -> (Circuit, PassReport) {
    let mut replacement: Vec<Option<Vec<Gate>>> = vec![None; c.len()];
    let mut removed = vec![false; c.len()];
    for block in collect_blocks(c).iter().filter(|b| b.two_qubit >= 2) {
        if let Some(seq) = resynthesize(c, block) {
            for &i in &block.members {
                removed[i] = true;
            }
            replacement[*block.members.last().unwrap()] = Some(seq);
        }
    }
    let mut out = Vec::with_capacity(c.len());
    for (i, g) in c.gates().iter().enumerate() {
        if let Some(seq) = replacement[i].take() {
            out.extend(seq);
        } else if !removed[i] {
            out.push(g.clone());
        }
    }
    let result = c.with_gates(out).expect("resynthesis keeps gates valid");
    let report = PassReport::new("collect_and_resynthesize_blocks", c, &result, 1);
    (result, report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::unitary_equal_up_to_phase;

    fn circuit(width: usize, gates: Vec<Gate>) -> Circuit {
        Circuit::new("t", width, gates).unwrap()
    }

    #[test]
    fn blocks_absorb_pending_single_qubit_gates() {
        let c = circuit(3, vec![Gate::h(0), Gate::t(1), Gate::cx(0, 1), Gate::s(0), Gate::cx(1, 2), Gate::h(0)]);
        let blocks = collect_blocks(&c);
        assert_eq!(blocks.len(), 2);
        assert_eq!(blocks[0].members, vec![0, 1, 2, 3]);
        assert_eq!(blocks[1].members, vec![4]);
    }

    #[test]
    fn ccx_splits_blocks() {
        let c = circuit(3, vec![Gate::cx(0, 1), Gate::ccx(0, 1, 2), Gate::cx(0, 1)]);
        let blocks = collect_blocks(&c);
        assert_eq!(blocks.len(), 2);
        assert!(blocks.iter().all(|b| b.two_qubit == 1));
    }

    #[test]
    fn three_cx_swap_pattern_kept() {
        let gates = vec![Gate::cx(0, 1), Gate::cx(1, 0), Gate::cx(0, 1)];
        let (out, _) = collect_and_resynthesize_blocks(&circuit(2, gates.clone()));
        assert_eq!(out.gates(), &gates[..]);
    }

    #[test]
    fn redundant_cx_pair_collapses() {
        let c = circuit(2, vec![Gate::cx(0, 1), Gate::rz(0.3, 0), Gate::cx(0, 1), Gate::h(1)]);
        let (out, _) = collect_and_resynthesize_blocks(&c);
        assert_eq!(out.gate_counts().two, 0);
        assert!(unitary_equal_up_to_phase(&c, &out, 1e-9).unwrap());
    }

    #[test]
    fn longer_replacement_rejected() {
        // four CX but too few local gates to pay for the synthesised form
        let gates = vec![Gate::cx(0, 1), Gate::ry(0.4, 0), Gate::cx(1, 0), Gate::cx(0, 1), Gate::rx(0.2, 0), Gate::cx(1, 0)];
        let c = circuit(2, gates.clone());
        let (out, _) = collect_and_resynthesize_blocks(&c);
        assert!(out.len() <= c.len());
        assert!(unitary_equal_up_to_phase(&c, &out, 1e-9).unwrap());
    }

    #[test]
    fn four_cx_block_reduced() {
        let c = circuit(
            3,
            vec![
                Gate::h(2),
                Gate::cx(0, 1),
                Gate::ry(0.4, 0),
                Gate::h(1),
                Gate::cx(1, 0),
                Gate::rz(1.1, 1),
                Gate::t(0),
                Gate::cx(0, 1),
                Gate::rx(0.2, 0),
                Gate::s(1),
                Gate::cx(1, 0),
                Gate::h(0),
                Gate::t(2),
            ],
        );
        let (out, _) = collect_and_resynthesize_blocks(&c);
        assert!(out.gate_counts().two <= 3);
        assert!(out.len() < c.len());
        assert!(unitary_equal_up_to_phase(&c, &out, 1e-9).unwrap());
    }
}
