//! Deterministic benchmark-circuit generators.
//!
//! The families are structural stand-ins for common benchmark algorithms:
//! they reproduce gate mix and interaction patterns, not algorithmic
//! semantics.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{Circuit, Gate};
use crate::frontend::qasm::{emit_qasm, parse_qasm_with_id, QasmError};

pub const MIN_WIDTH: usize = 2;
pub const MAX_WIDTH: usize = 130;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("width {0} outside the supported range [{MIN_WIDTH}, {MAX_WIDTH}]")]
    Width(usize),
    #[error("unknown circuit family \"{0}\"")]
    UnknownFamily(String),
    #[error("{path}: {source}")]
    Qasm { path: String, source: QasmError },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("no .qasm files found in {0}")]
    Empty(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Ghz,
    Wchain,
    Qft,
    QaoaRing,
    GroverLike,
    Random,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Ghz,
        Family::Wchain,
        Family::Qft,
        Family::QaoaRing,
        Family::GroverLike,
        Family::Random,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Ghz => "ghz",
            Family::Wchain => "wchain",
            Family::Qft => "qft",
            Family::QaoaRing => "qaoa_ring",
            Family::GroverLike => "grover_like",
            Family::Random => "random",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| CorpusError::UnknownFamily(s.to_string()))
    }
}

/// Which circuits make up a generated corpus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub families: Vec<Family>,
    pub widths: Vec<usize>,
    /// One random instance per seed and width; ignored by the fixed families.
    pub seeds: Vec<u64>,
}

impl CorpusSpec {
    /// Six families over widths 2, 4, ..., 128 (powers of two) and three
    /// seeds for the random family.
    pub fn standard(base_seed: u64) -> Self {
        CorpusSpec {
            families: Family::ALL.to_vec(),
            widths: (1..=7).map(|e| 1usize << e).collect(),
            seeds: (0..3).map(|i| base_seed.wrapping_add(i)).collect(),
        }
    }

    /// Keeps only widths `<= max_width`.
    pub fn with_max_width(mut self, max_width: usize) -> Self {
        self.widths.retain(|&w| w <= max_width);
        self
    }

    /// All circuits of the corpus, in a fixed order (family, width, seed).
    pub fn circuits(&self) -> Result<Vec<Circuit>, CorpusError> {
        let mut out = Vec::new();
        for &family in &self.families {
            for &width in &self.widths {
                if family == Family::Random {
                    for &seed in &self.seeds {
                        out.push(generate(family, width, seed)?);
                    }
                } else {
                    out.push(generate(family, width, 0)?);
                }
            }
        }
        Ok(out)
    }
}

pub fn circuit_id(family: Family, width: usize, seed: u64) -> String {
    match family {
        Family::Random => format!("{family}_{width:03}_s{seed}"),
        _ => format!("{family}_{width:03}"),
    }
}

/// Builds one circuit of `family`. `seed` only affects the random family.
pub fn generate(family: Family, width: usize, seed: u64) -> Result<Circuit, CorpusError> {
    if !(MIN_WIDTH..=MAX_WIDTH).contains(&width) {
        return Err(CorpusError::Width(width));
    }
    let n = width;
    let gates = match family {
        Family::Ghz => ghz(n),
        Family::Wchain => wchain(n),
        Family::Qft => qft(n),
        Family::QaoaRing => qaoa_ring(n),
        Family::GroverLike => grover_like(n),
        Family::Random => random(n, seed),
    };
    let c = Circuit::new(circuit_id(family, width, seed), width, gates)
        .expect("generators only emit valid gates");
    Ok(c)
}

fn ghz(n: usize) -> Vec<Gate> {
    let mut g = vec![Gate::h(0)];
    g.extend((0..n - 1).map(|i| Gate::cx(i, i + 1)));
    g
}

fn wchain(n: usize) -> Vec<Gate> {
    let mut g = vec![Gate::x(0)];
    for i in 0..n - 1 {
        let theta = 2.0 * (1.0 / (n - i) as f64).sqrt().acos();
        g.push(Gate::ry(theta / 2.0, i + 1));
        g.push(Gate::cz(i, i + 1));
        g.push(Gate::ry(-theta / 2.0, i + 1));
        g.push(Gate::cx(i + 1, i));
    }
    g
}

/// Controlled phases become `RZ, CZ, RZ`, one two-qubit gate per pair; no
/// final reversal swaps.
fn qft(n: usize) -> Vec<Gate> {
    let mut g = Vec::new();
    for j in 0..n {
        g.push(Gate::h(j));
        for k in j + 1..n {
            let lambda = PI / (1u128 << (k - j).min(100)) as f64;
            g.push(Gate::rz(lambda / 2.0, k));
            g.push(Gate::cz(j, k));
            g.push(Gate::rz(lambda / 2.0, j));
        }
    }
    g
}

fn qaoa_ring(n: usize) -> Vec<Gate> {
    const GAMMA: [f64; 2] = [0.4, 0.8];
    const BETA: [f64; 2] = [0.7, 0.3];
    let edges: Vec<(usize, usize)> = if n == 2 {
        vec![(0, 1)]
    } else {
        (0..n).map(|i| (i, (i + 1) % n)).collect()
    };
    let mut g: Vec<Gate> = (0..n).map(Gate::h).collect();
    for layer in 0..2 {
        for &(a, b) in &edges {
            g.push(Gate::cx(a, b));
            g.push(Gate::rz(2.0 * GAMMA[layer], b));
            g.push(Gate::cx(a, b));
        }
        g.extend((0..n).map(|q| Gate::rx(2.0 * BETA[layer], q)));
    }
    g
}

/// Oracle: compute ladder, phase, uncompute. Diffusion: H/X sandwich
/// around the same ladder.
fn grover_like(n: usize) -> Vec<Gate> {
    let ladder = |g: &mut Vec<Gate>, reverse: bool| {
        let mut steps: Vec<usize> = (0..n.saturating_sub(2)).collect();
        if reverse {
            steps.reverse();
        }
        for i in steps {
            g.push(Gate::ccx(i, i + 1, i + 2));
        }
    };
    let mut g: Vec<Gate> = (0..n).map(Gate::h).collect();
    for _ in 0..2 {
        for q in (0..n).step_by(2) {
            g.push(Gate::x(q));
        }
        ladder(&mut g, false);
        g.push(Gate::cz(n - 2, n - 1));
        ladder(&mut g, true);
        for q in (0..n).step_by(2) {
            g.push(Gate::x(q));
        }
        g.extend((0..n).map(Gate::h));
        g.extend((0..n).map(Gate::x));
        ladder(&mut g, false);
        g.push(Gate::cz(n - 2, n - 1));
        ladder(&mut g, true);
        g.extend((0..n).map(Gate::x));
        g.extend((0..n).map(Gate::h));
    }
    g
}

/// `10 * n` gates drawn uniformly from {H, T, RZ, CX, CCX}; qubits are a
/// uniform sample of distinct indices. CCX is left out of the draw when
/// `n < 3`.
fn random(n: usize, seed: u64) -> Vec<Gate> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((n as u64) << 32));
    let kinds = if n >= 3 { 5 } else { 4 };
    (0..10 * n)
        .map(|_| {
            let kind = rng.random_range(0..kinds);
            let arity = match kind {
                0..=2 => 1,
                3 => 2,
                _ => 3,
            };
            let qs = sample(&mut rng, n, arity).into_vec();
            match kind {
                0 => Gate::h(qs[0]),
                1 => Gate::t(qs[0]),
                2 => Gate::rz(rng.random_range(-PI..PI), qs[0]),
                3 => Gate::cx(qs[0], qs[1]),
                _ => Gate::ccx(qs[0], qs[1], qs[2]),
            }
        })
        .collect()
}

/// Writes every circuit as `<id>.qasm` into `dir`.
pub fn write_corpus(dir: &Path, circuits: &[Circuit]) -> Result<(), CorpusError> {
    let io = |p: &Path, source| CorpusError::Io { path: p.display().to_string(), source };
    std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    for c in circuits {
        let path = dir.join(format!("{}.qasm", c.id()));
        let text = emit_qasm(c).map_err(|source| CorpusError::Qasm {
            path: path.display().to_string(),
            source,
        })?;
        std::fs::write(&path, text).map_err(|e| io(&path, e))?;
    }
    Ok(())
}

/// Loads every `*.qasm` file of `dir`, sorted by file name; the file stem
/// becomes the circuit id.
pub fn load_corpus(dir: &Path) -> Result<Vec<Circuit>, CorpusError> {
    let io = |p: &Path, source| CorpusError::Io { path: p.display().to_string(), source };
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "qasm"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(CorpusError::Empty(dir.display().to_string()));
    }
    paths
        .iter()
        .map(|p| {
            let text = std::fs::read_to_string(p).map_err(|e| io(p, e))?;
            let id = p.file_stem().unwrap_or_default().to_string_lossy();
            parse_qasm_with_id(&text, &id).map_err(|source| CorpusError::Qasm {
                path: p.display().to_string(),
                source,
            })
        })
        .collect()
}
