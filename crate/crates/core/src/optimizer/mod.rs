//! Pass-based circuit optimisation: inverse cancellation, rotation merging,
//! commutation-aware cancellation and two-qubit block resynthesis.
//!
//! Every pass preserves the circuit unitary up to global phase and treats
//! telegate markers as opaque barriers on the qubits they touch.

mod blocks;
mod cancel;
mod commute;
pub mod kak;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, GateCounts};

pub use blocks::collect_and_resynthesize_blocks;
pub use cancel::{cancel_inverse_pairs, merge_rotations};
pub use commute::{commutative_cancellation, commutes};
pub use kak::{kak_resynthesize, weyl_coordinates, KakError, WeylCoordinates};

/// Upper bound on optimisation loop iterations.
pub const MAX_OPTIMIZE_ITERATIONS: usize = 10;

/// Before/after statistics of one pass application.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PassReport {
    pub pass: String,
    pub before: GateCounts,
    pub after: GateCounts,
    pub depth_before: usize,
    pub depth_after: usize,
    /// Sweeps the pass needed to reach its own fixpoint.
    pub iterations: usize,
}

impl PassReport {
    pub(crate) fn new(pass: &str, before: &Circuit, after: &Circuit, iterations: usize) -> Self {
        PassReport {
            pass: pass.to_string(),
            before: before.gate_counts(),
            after: after.gate_counts(),
            depth_before: before.depth(),
            depth_after: after.depth(),
            iterations: iterations.max(1),
        }
    }

    pub fn changed_counts(&self) -> bool {
        self.before != self.after
    }
}

type PassFn = fn(&Circuit) -> (Circuit, PassReport);

/// Pass order of one optimisation round.
pub const PASSES: [(&str, PassFn); 4] = [
    ("cancel_inverse_pairs", cancel_inverse_pairs),
    ("merge_rotations", merge_rotations),
    ("commutative_cancellation", commutative_cancellation),
    ("collect_and_resynthesize_blocks", collect_and_resynthesize_blocks),
];

/// Runs the pass sequence until a full round leaves the circuit unchanged,
/// or [`MAX_OPTIMIZE_ITERATIONS`] rounds have run. Returns one report per
/// pass per round.
pub fn optimize(c: &Circuit) -> (Circuit, Vec<PassReport>) {
    let mut current = c.clone();
    let mut reports = Vec::new();
    for _round in 0..MAX_OPTIMIZE_ITERATIONS {
        let mut changed = false;
        for (_, pass) in PASSES {
            let (next, report) = pass(&current);
            changed |= next.gates() != current.gates();
            reports.push(report);
            current = next;
        }
        if !changed {
            break;
        }
    }
    (current, reports)
}

/// Number of rounds recorded in an `optimize` report list.
pub fn rounds(reports: &[PassReport]) -> usize {
    reports.len() / PASSES.len()
}
