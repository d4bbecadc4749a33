//! Dense statevector simulator. Used only as the equivalence and brute-force
//! test oracle, so it favours clarity over speed.

use num_complex::Complex;
use thiserror::Error;

use crate::circuit::{Circuit, Gate, GateKind};
use crate::linalg::Matrix;
use crate::scalar::Real;

/// Widest register the oracle will simulate.
pub const MAX_ORACLE_WIDTH: usize = 10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("circuit contains telegate markers; the oracle only simulates local gates")]
    MarkerPresent,
    #[error("width {0} exceeds the oracle limit of {MAX_ORACLE_WIDTH} qubits")]
    TooWide(usize),
    #[error("width mismatch: {0} vs {1}")]
    WidthMismatch(usize, usize),
}

/// Amplitudes over `2^n` basis states. Qubit `q` is bit `q` of the index.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T> {
    width: usize,
    amps: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    pub fn zero_state(width: usize) -> Result<Self, SimError> {
        Self::basis(width, 0)
    }

    pub fn basis(width: usize, index: usize) -> Result<Self, SimError> {
        if width > MAX_ORACLE_WIDTH {
            return Err(SimError::TooWide(width));
        }
        let mut amps = vec![Complex::new(T::zero(), T::zero()); 1 << width];
        amps[index] = Complex::new(T::one(), T::zero());
        Ok(StateVector { width, amps })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn norm(&self) -> T {
        self.amps.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr()).sqrt()
    }

    pub fn probabilities(&self) -> Vec<T> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    fn apply_1q(&mut self, m: &Matrix<T, 2>, q: usize) {
        let bit = 1 << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let a0 = self.amps[i];
                let a1 = self.amps[i | bit];
                self.amps[i] = m.0[0][0] * a0 + m.0[0][1] * a1;
                self.amps[i | bit] = m.0[1][0] * a0 + m.0[1][1] * a1;
            }
        }
    }

    pub fn apply_gate(&mut self, g: &Gate) -> Result<(), SimError> {
        if let Some(m) = g.matrix_1q::<T>() {
            self.apply_1q(&m, g.qubits[0]);
            return Ok(());
        }
        let q = &g.qubits;
        match g.kind {
            GateKind::Cx => {
                let (c, t) = (1 << q[0], 1 << q[1]);
                for i in 0..self.amps.len() {
                    if i & c != 0 && i & t == 0 {
                        self.amps.swap(i, i | t);
                    }
                }
            }
            GateKind::Cz => {
                let mask = (1 << q[0]) | (1 << q[1]);
                for (i, a) in self.amps.iter_mut().enumerate() {
                    if i & mask == mask {
                        *a = -*a;
                    }
                }
            }
            GateKind::Swap => {
                let (a, b) = (1 << q[0], 1 << q[1]);
                for i in 0..self.amps.len() {
                    if i & a != 0 && i & b == 0 {
                        self.amps.swap(i, (i & !a) | b);
                    }
                }
            }
            GateKind::Ccx => {
                let controls = (1 << q[0]) | (1 << q[1]);
                let t = 1 << q[2];
                for i in 0..self.amps.len() {
                    if i & controls == controls && i & t == 0 {
                        self.amps.swap(i, i | t);
                    }
                }
            }
            GateKind::Telegate(_) => return Err(SimError::MarkerPresent),
            _ => unreachable!("single-qubit kinds handled above"),
        }
        Ok(())
    }
}

/// Evolves `state` through every gate of `c`.
pub fn apply<T: Real>(c: &Circuit, state: &StateVector<T>) -> Result<StateVector<T>, SimError> {
    if c.width() > MAX_ORACLE_WIDTH {
        return Err(SimError::TooWide(c.width()));
    }
    if c.width() != state.width {
        return Err(SimError::WidthMismatch(c.width(), state.width));
    }
    if c.has_markers() {
        return Err(SimError::MarkerPresent);
    }
    let mut s = state.clone();
    for g in c.gates() {
        s.apply_gate(g)?;
    }
    Ok(s)
}

/// Full-unitary comparison: both circuits are applied to every basis state
/// and the columns must agree under one common phase within `tol`
/// (max-entry metric).
pub fn unitary_equal_up_to_phase<T: Real>(a: &Circuit, b: &Circuit, tol: T) -> Result<bool, SimError> {
    if a.width() != b.width() {
        return Err(SimError::WidthMismatch(a.width(), b.width()));
    }
    let n = a.width();
    if n > MAX_ORACLE_WIDTH {
        return Err(SimError::TooWide(n));
    }
    if a.has_markers() || b.has_markers() {
        return Err(SimError::MarkerPresent);
    }
    let mut phase: Option<Complex<T>> = None;
    for col in 0..1usize << n {
        let basis = StateVector::<T>::basis(n, col)?;
        let sa = apply(a, &basis)?;
        let sb = apply(b, &basis)?;
        let lambda = match phase {
            Some(p) => p,
            None => {
                // Anchor the phase on the largest entry of the first column.
                let (idx, _) = sb
                    .amps
                    .iter()
                    .enumerate()
                    .max_by(|x, y| x.1.norm().partial_cmp(&y.1.norm()).unwrap())
                    .unwrap();
                let ratio = sa.amps[idx] / sb.amps[idx];
                let r = ratio.norm();
                if !(r > T::zero()) {
                    return Ok(false);
                }
                let p = ratio / r;
                phase = Some(p);
                p
            }
        };
        for (x, y) in sa.amps.iter().zip(&sb.amps) {
            if (*x - *y * lambda).norm() > tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Dense unitary of a small circuit (column `j` is the image of `|j>`).
pub fn unitary<T: Real>(c: &Circuit) -> Result<Vec<Vec<Complex<T>>>, SimError> {
    let n = c.width();
    if n > MAX_ORACLE_WIDTH {
        return Err(SimError::TooWide(n));
    }
    (0..1usize << n)
        .map(|col| Ok(apply(c, &StateVector::basis(n, col)?)?.amps))
        .collect()
}
