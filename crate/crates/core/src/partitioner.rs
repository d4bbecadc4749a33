//! Qubit dependency hypergraphs and balanced k-way partitioning.
//!
//! The solver is multilevel: heavy-net matching coarsens the hypergraph to
//! at most `2k` vertices, a seeded greedy assignment seeds the coarsest
//! level, and k-way Fiduccia-Mattheyses refinement on cut-net gain runs on
//! every level while projecting back.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

use crate::circuit::Circuit;

/// Default imbalance tolerance.
pub const DEFAULT_EPSILON: f64 = 0.03;

const INITIAL_TRIALS: usize = 8;
const MAX_FM_PASSES: usize = 12;
const FM_PATIENCE: usize = 25;

pub type Pins = SmallVec<[usize; 3]>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Net {
    pub vertices: Pins,
    pub weight: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    vertex_count: usize,
    nets: Vec<Net>,
}

#[derive(Debug, Error, PartialEq)]
pub enum PartitionError {
    #[error("cannot split {vertices} vertices into {k} nonempty parts")]
    Infeasible { k: usize, vertices: usize },
    #[error("part count must be at least 1")]
    ZeroParts,
    #[error("imbalance tolerance must be finite and non-negative, got {0}")]
    Epsilon(f64),
    #[error("net {index}: {reason}")]
    InvalidNet { index: usize, reason: &'static str },
    #[error("assignment covers {found} vertices, expected {expected}")]
    AssignmentLength { found: usize, expected: usize },
    #[error("vertex {vertex} assigned to part {part}, but k = {k}")]
    PartOutOfRange { vertex: usize, part: usize, k: usize },
}

impl Hypergraph {
    pub fn new(vertex_count: usize, nets: Vec<Net>) -> Result<Self, PartitionError> {
        for (index, net) in nets.iter().enumerate() {
            let bad = |reason| Err(PartitionError::InvalidNet { index, reason });
            if net.vertices.len() < 2 {
                return bad("fewer than two vertices");
            }
            if net.weight == 0 {
                return bad("zero weight");
            }
            if net.vertices.iter().any(|&v| v >= vertex_count) {
                return bad("vertex out of range");
            }
            let mut sorted = net.vertices.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return bad("repeated vertex");
            }
        }
        Ok(Hypergraph { vertex_count, nets })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn nets(&self) -> &[Net] {
        &self.nets
    }

    pub fn total_weight(&self) -> u64 {
        self.nets.iter().map(|n| n.weight).sum()
    }
}

/// One net per distinct multi-qubit support set, weighted by multiplicity.
/// Nets come out sorted by their (sorted) vertex lists.
pub fn build_hypergraph(c: &Circuit) -> Hypergraph {
    let mut nets: BTreeMap<Pins, u64> = BTreeMap::new();
    for g in c.gates().iter().filter(|g| g.arity() >= 2) {
        let mut support = g.qubits.clone();
        support.sort_unstable();
        *nets.entry(support).or_default() += 1;
    }
    let nets = nets.into_iter().map(|(vertices, weight)| Net { vertices, weight }).collect();
    Hypergraph { vertex_count: c.width(), nets }
}

/// Largest part size allowed: `ceil((1 + epsilon) * n / k)`.
pub fn balance_bound(n: usize, k: usize, epsilon: f64) -> usize {
    let exact = (1.0 + epsilon) * n as f64 / k as f64;
    // absorb representation error such as 1.03 * 200 = 206.00000000000003
    (exact - 1e-9).ceil().max(1.0) as usize
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    k: usize,
    assignment: Vec<usize>,
    epsilon: f64,
}

impl Partition {
    pub fn new(k: usize, assignment: Vec<usize>, epsilon: f64) -> Result<Self, PartitionError> {
        check_args(k, epsilon)?;
        if let Some((vertex, &part)) = assignment.iter().enumerate().find(|(_, &p)| p >= k) {
            return Err(PartitionError::PartOutOfRange { vertex, part, k });
        }
        Ok(Partition { k, assignment, epsilon })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn part_of(&self, v: usize) -> usize {
        self.assignment[v]
    }

    pub fn vertex_count(&self) -> usize {
        self.assignment.len()
    }

    pub fn part_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &p in &self.assignment {
            sizes[p] += 1;
        }
        sizes
    }

    pub fn max_part_size(&self) -> usize {
        self.part_sizes().into_iter().max().unwrap_or(0)
    }

    pub fn capacity(&self) -> usize {
        balance_bound(self.vertex_count(), self.k, self.epsilon)
    }

    /// Balance bound holds and, when `k <= n`, no part is empty.
    pub fn is_balanced(&self) -> bool {
        let sizes = self.part_sizes();
        let nonempty = self.k > self.vertex_count() || sizes.iter().all(|&s| s > 0);
        nonempty && sizes.iter().all(|&s| s <= self.capacity())
    }

    /// Vertices of part `p`, ascending.
    pub fn members(&self, p: usize) -> Vec<usize> {
        (0..self.vertex_count()).filter(|&v| self.assignment[v] == p).collect()
    }
}

fn check_args(k: usize, epsilon: f64) -> Result<(), PartitionError> {
    if k == 0 {
        return Err(PartitionError::ZeroParts);
    }
    if !epsilon.is_finite() || epsilon < 0.0 {
        return Err(PartitionError::Epsilon(epsilon));
    }
    Ok(())
}

fn parts_touched(net: &Net, p: &Partition) -> usize {
    let mut seen: SmallVec<[usize; 3]> = SmallVec::new();
    for &v in &net.vertices {
        let part = p.part_of(v);
        if !seen.contains(&part) {
            seen.push(part);
        }
    }
    seen.len()
}

/// Cut-net cost: total weight of nets spanning at least two parts.
pub fn cut_cost(h: &Hypergraph, p: &Partition) -> u64 {
    h.nets.iter().filter(|n| parts_touched(n, p) > 1).map(|n| n.weight).sum()
}

/// Connectivity minus one: each net costs `weight * (parts touched - 1)`.
pub fn connectivity_minus_one(h: &Hypergraph, p: &Partition) -> u64 {
    h.nets.iter().map(|n| n.weight * (parts_touched(n, p) as u64 - 1)).sum()
}

/// Balanced k-way partition minimising the cut-net cost. Deterministic for
/// a fixed `(h, k, epsilon, seed)`.
pub fn partition(h: &Hypergraph, k: usize, epsilon: f64, seed: u64) -> Result<Partition, PartitionError> {
    check_args(k, epsilon)?;
    let n = h.vertex_count;
    if k > n {
        return Err(PartitionError::Infeasible { k, vertices: n });
    }
    if k == 1 {
        return Partition::new(1, vec![0; n], epsilon);
    }
    let cap = balance_bound(n, k, epsilon) as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut levels = vec![Level::from_hypergraph(h)];
    let mut maps: Vec<Vec<usize>> = Vec::new();
    let weight_limit = (cap / 2).max(1);
    while levels.last().unwrap().len() > 2 * k {
        match levels.last().unwrap().coarsen(weight_limit, &mut rng) {
            Some((coarse, map)) => {
                levels.push(coarse);
                maps.push(map);
            }
            None => break,
        }
    }

    let coarsest = levels.last().unwrap();
    let mut best: Option<((u64, u64), Vec<usize>)> = None;
    for _ in 0..INITIAL_TRIALS {
        let mut parts = coarsest.greedy_initial(k, cap, &mut rng);
        let mut state = State::new(coarsest, k, cap, &parts);
        state.rebalance(coarsest, &mut parts);
        state.refine(coarsest, &mut parts);
        let score = (state.overload(), state.cut);
        if best.as_ref().is_none_or(|(s, _)| score < *s) {
            best = Some((score, parts));
        }
    }
    let mut parts = best.unwrap().1;

    for depth in (0..maps.len()).rev() {
        let map = &maps[depth];
        parts = map.iter().map(|&coarse| parts[coarse]).collect();
        let level = &levels[depth];
        let mut state = State::new(level, k, cap, &parts);
        state.rebalance(level, &mut parts);
        state.refine(level, &mut parts);
    }
    Partition::new(k, parts, epsilon)
}

/// Exhaustive optimum for small instances: enumerates all `k^n` balanced
/// assignments with nonempty parts. Returns `None` when none is feasible.
/// Cost grows as `k^n`; intended for `n <= 16` with `k = 2`.
pub fn exhaustive_partition(h: &Hypergraph, k: usize, epsilon: f64) -> Result<Option<(u64, Partition)>, PartitionError> {
    check_args(k, epsilon)?;
    let n = h.vertex_count;
    let total = (k as u128).checked_pow(n as u32).filter(|&t| t <= 1 << 24);
    let Some(total) = total else {
        return Err(PartitionError::Infeasible { k, vertices: n });
    };
    let mut best: Option<(u64, Partition)> = None;
    for code in 0..total {
        let mut rest = code;
        let assignment: Vec<usize> = (0..n)
            .map(|_| {
                let p = (rest % k as u128) as usize;
                rest /= k as u128;
                p
            })
            .collect();
        let p = Partition::new(k, assignment, epsilon)?;
        if !p.is_balanced() {
            continue;
        }
        let cost = cut_cost(h, &p);
        if best.as_ref().is_none_or(|(c, _)| cost < *c) {
            best = Some((cost, p));
        }
    }
    Ok(best)
}

/// Weighted hypergraph for one level of the hierarchy.
struct Level {
    vweight: Vec<u64>,
    nets: Vec<(Vec<usize>, u64)>,
    incident: Vec<Vec<usize>>,
}

impl Level {
    fn build(vweight: Vec<u64>, nets: Vec<(Vec<usize>, u64)>) -> Self {
        let mut incident = vec![Vec::new(); vweight.len()];
        for (e, (pins, _)) in nets.iter().enumerate() {
            for &v in pins {
                incident[v].push(e);
            }
        }
        Level { vweight, nets, incident }
    }

    fn from_hypergraph(h: &Hypergraph) -> Self {
        let nets = h.nets.iter().map(|n| (n.vertices.to_vec(), n.weight)).collect();
        Level::build(vec![1; h.vertex_count], nets)
    }

    fn len(&self) -> usize {
        self.vweight.len()
    }

    /// Heavy-net matching: each unmatched vertex, in seeded order, pairs with
    /// the unmatched neighbour of highest `sum w / (|e| - 1)` whose combined
    /// weight stays within `weight_limit`.
    fn coarsen(&self, weight_limit: u64, rng: &mut ChaCha8Rng) -> Option<(Level, Vec<usize>)> {
        let n = self.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        const FREE: usize = usize::MAX;
        let mut mate = vec![FREE; n];
        let mut rating = vec![0.0f64; n];
        let mut touched = Vec::new();
        for &u in &order {
            if mate[u] != FREE {
                continue;
            }
            for &e in &self.incident[u] {
                let (pins, w) = &self.nets[e];
                let r = *w as f64 / (pins.len() - 1) as f64;
                for &v in pins {
                    if v != u && mate[v] == FREE && self.vweight[u] + self.vweight[v] <= weight_limit {
                        if rating[v] == 0.0 {
                            touched.push(v);
                        }
                        rating[v] += r;
                    }
                }
            }
            let mut choice: Option<usize> = None;
            for &v in &touched {
                let better = match choice {
                    None => true,
                    Some(c) => rating[v] > rating[c] || (rating[v] == rating[c] && v < c),
                };
                if better {
                    choice = Some(v);
                }
            }
            for &v in &touched {
                rating[v] = 0.0;
            }
            touched.clear();
            let m = choice.unwrap_or(u);
            mate[u] = m;
            mate[m] = u;
        }

        let mut map = vec![FREE; n];
        let mut next = 0;
        for u in 0..n {
            if map[u] == FREE {
                map[u] = next;
                map[mate[u]] = next;
                next += 1;
            }
        }
        if next == n {
            return None;
        }
        let mut vweight = vec![0; next];
        for u in 0..n {
            vweight[map[u]] += self.vweight[u];
        }
        let mut merged: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
        for (pins, w) in &self.nets {
            let mut coarse: Vec<usize> = pins.iter().map(|&v| map[v]).collect();
            coarse.sort_unstable();
            coarse.dedup();
            if coarse.len() >= 2 {
                *merged.entry(coarse).or_default() += w;
            }
        }
        Some((Level::build(vweight, merged.into_iter().collect()), map))
    }

    /// Seeds one random vertex per part, then assigns the rest in seeded
    /// order to the feasible part with the most connecting net weight.
    fn greedy_initial(&self, k: usize, cap: u64, rng: &mut ChaCha8Rng) -> Vec<usize> {
        let n = self.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let mut parts = vec![usize::MAX; n];
        let mut sizes = vec![0u64; k];
        for (p, &v) in order.iter().take(k).enumerate() {
            parts[v] = p;
            sizes[p] += self.vweight[v];
        }
        let mut conn = vec![0u64; k];
        for &v in order.iter().skip(k) {
            conn.iter_mut().for_each(|c| *c = 0);
            for &e in &self.incident[v] {
                let (pins, w) = &self.nets[e];
                let mut seen: SmallVec<[usize; 4]> = SmallVec::new();
                for &u in pins {
                    let p = parts[u];
                    if p != usize::MAX && !seen.contains(&p) {
                        seen.push(p);
                        conn[p] += w;
                    }
                }
            }
            let w = self.vweight[v];
            let fits = |p: usize| sizes[p] + w <= cap;
            let pick = (0..k)
                .filter(|&p| fits(p))
                .max_by(|&a, &b| conn[a].cmp(&conn[b]).then(sizes[b].cmp(&sizes[a])).then(b.cmp(&a)))
                .unwrap_or_else(|| (0..k).min_by_key(|&p| (sizes[p], p)).unwrap());
            parts[v] = pick;
            sizes[pick] += w;
        }
        parts
    }
}

/// Incremental refinement state: per-net pin counts by part, part weights
/// and vertex counts, and the running cut.
struct State {
    k: usize,
    cap: u64,
    pins: Vec<u32>,
    sizes: Vec<u64>,
    counts: Vec<usize>,
    cut: u64,
}

impl State {
    fn new(level: &Level, k: usize, cap: u64, parts: &[usize]) -> Self {
        let mut pins = vec![0u32; level.nets.len() * k];
        let mut cut = 0;
        for (e, (vs, w)) in level.nets.iter().enumerate() {
            for &v in vs {
                pins[e * k + parts[v]] += 1;
            }
            if (0..k).filter(|&p| pins[e * k + p] > 0).count() > 1 {
                cut += w;
            }
        }
        let mut sizes = vec![0; k];
        let mut counts = vec![0; k];
        for (v, &p) in parts.iter().enumerate() {
            sizes[p] += level.vweight[v];
            counts[p] += 1;
        }
        State { k, cap, pins, sizes, counts, cut }
    }

    fn overload(&self) -> u64 {
        self.sizes.iter().map(|&s| s.saturating_sub(self.cap)).sum()
    }

    /// Cut reduction obtained by moving `v` from `from` to `to`.
    fn gain(&self, level: &Level, v: usize, from: usize, to: usize) -> i64 {
        let mut g = 0i64;
        for &e in &level.incident[v] {
            let (vs, w) = &level.nets[e];
            let size = vs.len() as u32;
            let in_from = self.pins[e * self.k + from];
            let in_to = self.pins[e * self.k + to];
            if in_from == size {
                g -= *w as i64;
            } else if in_from == 1 && in_to == size - 1 {
                g += *w as i64;
            }
        }
        g
    }

    fn apply(&mut self, level: &Level, parts: &mut [usize], v: usize, to: usize, gain: i64) {
        let from = parts[v];
        for &e in &level.incident[v] {
            self.pins[e * self.k + from] -= 1;
            self.pins[e * self.k + to] += 1;
        }
        let w = level.vweight[v];
        self.sizes[from] -= w;
        self.sizes[to] += w;
        self.counts[from] -= 1;
        self.counts[to] += 1;
        self.cut = (self.cut as i64 - gain) as u64;
        parts[v] = to;
    }

    fn movable(&self, level: &Level, parts: &[usize], v: usize, to: usize) -> bool {
        let from = parts[v];
        from != to && self.counts[from] > 1 && self.sizes[to] + level.vweight[v] <= self.cap
    }

    /// Moves vertices out of overloaded parts, cheapest loss first.
    fn rebalance(&mut self, level: &Level, parts: &mut [usize]) {
        while let Some(from) = (0..self.k).find(|&p| self.sizes[p] > self.cap) {
            let mut best: Option<(i64, usize, usize)> = None;
            for v in (0..level.len()).filter(|&v| parts[v] == from) {
                for to in 0..self.k {
                    if self.movable(level, parts, v, to) {
                        let g = self.gain(level, v, from, to);
                        if best.is_none_or(|(bg, _, _)| g > bg) {
                            best = Some((g, v, to));
                        }
                    }
                }
            }
            let Some((g, v, to)) = best else { return };
            self.apply(level, parts, v, to, g);
        }
    }

    fn refine(&mut self, level: &Level, parts: &mut [usize]) {
        for _ in 0..MAX_FM_PASSES {
            if !self.fm_pass(level, parts) {
                break;
            }
        }
    }

    /// One FM pass with locking, early exit after [`FM_PATIENCE`] moves
    /// without a new best, and rollback to the best prefix.
    fn fm_pass(&mut self, level: &Level, parts: &mut [usize]) -> bool {
        let n = level.len();
        let k = self.k;
        let start = self.cut;
        let mut locked = vec![false; n];
        let mut gains = vec![0i64; n * k];
        let mut dirty = vec![true; n];
        let mut moves: Vec<(usize, usize, i64)> = Vec::new();
        let (mut best_cut, mut best_len, mut stale) = (start, 0usize, 0usize);

        loop {
            for v in 0..n {
                if dirty[v] && !locked[v] {
                    for to in 0..k {
                        if to != parts[v] {
                            gains[v * k + to] = self.gain(level, v, parts[v], to);
                        }
                    }
                    dirty[v] = false;
                }
            }
            let mut choice: Option<(i64, i64, usize, usize)> = None;
            for v in (0..n).filter(|&v| !locked[v]) {
                let from = parts[v];
                for to in 0..k {
                    if !self.movable(level, parts, v, to) {
                        continue;
                    }
                    let g = gains[v * k + to];
                    let spread = self.sizes[from] as i64 - self.sizes[to] as i64;
                    if choice.is_none_or(|(bg, bs, _, _)| (g, spread) > (bg, bs)) {
                        choice = Some((g, spread, v, to));
                    }
                }
            }
            let Some((g, _, v, to)) = choice else { break };
            let from = parts[v];
            self.apply(level, parts, v, to, g);
            locked[v] = true;
            moves.push((v, from, g));
            for &e in &level.incident[v] {
                for &u in &level.nets[e].0 {
                    dirty[u] = true;
                }
            }
            if self.cut < best_cut {
                best_cut = self.cut;
                best_len = moves.len();
                stale = 0;
            } else {
                stale += 1;
                if stale >= FM_PATIENCE {
                    break;
                }
            }
        }
        while moves.len() > best_len {
            let (v, from, g) = moves.pop().unwrap();
            self.apply(level, parts, v, from, -g);
        }
        best_cut < start
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;
    use proptest::prelude::*;

    fn net(vs: &[usize], weight: u64) -> Net {
        Net { vertices: vs.iter().copied().collect(), weight }
    }

    fn bridge() -> Hypergraph {
        let mut nets = Vec::new();
        for base in [0, 4] {
            for a in 0..4 {
                for b in a + 1..4 {
                    nets.push(net(&[base + a, base + b], 3));
                }
            }
        }
        nets.push(net(&[3, 4], 1));
        Hypergraph::new(8, nets).unwrap()
    }

    #[test]
    fn hypergraph_examples() {
        let c = Circuit::new("h", 3, vec![Gate::h(0), Gate::cx(0, 1), Gate::cx(0, 1), Gate::cx(1, 2)]).unwrap();
        let h = build_hypergraph(&c);
        assert_eq!(h.nets(), &[net(&[0, 1], 2), net(&[1, 2], 1)]);
        let only_1q = Circuit::new("h", 2, vec![Gate::h(0), Gate::t(1)]).unwrap();
        assert!(build_hypergraph(&only_1q).nets().is_empty());
        let ccx = Circuit::new("h", 3, vec![Gate::ccx(2, 0, 1)]).unwrap();
        assert_eq!(build_hypergraph(&ccx).nets(), &[net(&[0, 1, 2], 1)]);
    }

    #[test]
    fn balance_bound_arithmetic() {
        assert_eq!(balance_bound(10, 3, 0.03), 4);
        assert_eq!(balance_bound(200, 2, 0.03), 103);
        assert_eq!(balance_bound(6, 3, 0.0), 2);
    }

    #[test]
    fn bridge_instance_optimum() {
        let h = bridge();
        let p = partition(&h, 2, 0.03, 1).unwrap();
        assert!(p.is_balanced());
        assert_eq!(cut_cost(&h, &p), 1);
        let (opt, _) = exhaustive_partition(&h, 2, 0.03).unwrap().unwrap();
        assert_eq!(opt, 1);
    }

    #[test]
    fn empty_hypergraph_any_k() {
        let h = Hypergraph::new(7, vec![]).unwrap();
        for k in 1..=7 {
            let p = partition(&h, k, 0.03, 5).unwrap();
            assert!(p.is_balanced());
            assert_eq!(cut_cost(&h, &p), 0);
        }
    }

    #[test]
    fn cut_cost_examples() {
        let h = Hypergraph::new(3, vec![net(&[0, 1], 2), net(&[0, 1, 2], 1)]).unwrap();
        let together = Partition::new(2, vec![0, 0, 0], 0.03).unwrap();
        assert_eq!(cut_cost(&h, &together), 0);
        let split = Partition::new(3, vec![0, 1, 2], 0.03).unwrap();
        assert_eq!(cut_cost(&h, &split), 3);
        assert_eq!(connectivity_minus_one(&h, &split), 2 + 2);
    }

    #[test]
    fn errors() {
        let h = bridge();
        assert_eq!(partition(&h, 9, 0.03, 0), Err(PartitionError::Infeasible { k: 9, vertices: 8 }));
        assert_eq!(partition(&h, 0, 0.03, 0), Err(PartitionError::ZeroParts));
        assert!(matches!(partition(&h, 2, -0.1, 0), Err(PartitionError::Epsilon(_))));
        assert!(Hypergraph::new(2, vec![net(&[0, 2], 1)]).is_err());
        assert!(Hypergraph::new(2, vec![net(&[0, 1], 0)]).is_err());
    }

    fn random_hypergraph() -> impl Strategy<Value = Hypergraph> {
        (3usize..=10).prop_flat_map(|n| {
            let pin = (0..n, 0..n).prop_filter("distinct", |(a, b)| a != b);
            prop::collection::vec((pin, 1u64..4), 0..25).prop_map(move |nets| {
                let nets = nets.into_iter().map(|((a, b), w)| net(&[a, b], w)).collect();
                Hypergraph::new(n, nets).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

        #[test]
        fn balanced_deterministic_and_consistent(h in random_hypergraph(), k in 2usize..5, seed in 0u64..1000) {
            prop_assume!(k <= h.vertex_count());
            let p = partition(&h, k, 0.03, seed).unwrap();
            prop_assert!(p.is_balanced());
            prop_assert_eq!(&p, &partition(&h, k, 0.03, seed).unwrap());
            let cut = cut_cost(&h, &p);
            prop_assert!(cut <= h.total_weight());
            let recount: u64 = h.nets().iter()
                .filter(|n| n.vertices.iter().any(|&v| p.part_of(v) != p.part_of(n.vertices[0])))
                .map(|n| n.weight)
                .sum();
            prop_assert_eq!(cut, recount);
            prop_assert!(connectivity_minus_one(&h, &p) >= cut);
        }
    }
}
