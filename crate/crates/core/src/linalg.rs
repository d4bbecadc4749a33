//! Small dense complex matrices and the handful of kernels the synthesis and
//! oracle code needs.

use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex;

use crate::scalar::Real;

/// Dense `N x N` complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix<T, const N: usize>(pub [[Complex<T>; N]; N]);

impl<T: Real, const N: usize> Matrix<T, N> {
    pub fn zeros() -> Self {
        Matrix([[Complex::new(T::zero(), T::zero()); N]; N])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.0[i][i] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_real(rows: [[T; N]; N]) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = Complex::new(rows[i][j], T::zero());
            }
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = self.0[j][i].conj();
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = self.0[j][i];
            }
        }
        m
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        let mut m = *self;
        for row in m.0.iter_mut() {
            for x in row.iter_mut() {
                *x = *x * s;
            }
        }
        m
    }

    pub fn trace(&self) -> Complex<T> {
        (0..N).fold(Complex::new(T::zero(), T::zero()), |acc, i| acc + self.0[i][i])
    }

    /// Largest entry-wise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut worst = T::zero();
        for i in 0..N {
            for j in 0..N {
                worst = worst.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        worst
    }

    /// Max entry of `|U^dagger U - I|`.
    pub fn unitarity_error(&self) -> T {
        (self.adjoint() * *self).max_abs_diff(&Self::identity())
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        self.unitarity_error() <= tol
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> Complex<T> {
        let mut a = self.0;
        let mut det = Complex::new(T::one(), T::zero());
        for col in 0..N {
            let pivot = (col..N)
                .max_by(|&x, &y| a[x][col].norm().partial_cmp(&a[y][col].norm()).unwrap())
                .unwrap();
            if a[pivot][col].norm() == T::zero() {
                return Complex::new(T::zero(), T::zero());
            }
            if pivot != col {
                a.swap(pivot, col);
                det = -det;
            }
            det = det * a[col][col];
            for row in col + 1..N {
                let f = a[row][col] / a[col][col];
                for k in col..N {
                    let v = a[col][k];
                    a[row][k] = a[row][k] - f * v;
                }
            }
        }
        det
    }

    /// Returns `Some(phase)` with `self ~= phase * other`, when the two agree up
    /// to a global phase within `tol` (max-entry metric).
    pub fn phase_to(&self, other: &Self, tol: T) -> Option<Complex<T>> {
        let mut best = (0, 0);
        for i in 0..N {
            for j in 0..N {
                if other.0[i][j].norm() > other.0[best.0][best.1].norm() {
                    best = (i, j);
                }
            }
        }
        let denom = other.0[best.0][best.1];
        if denom.norm() <= T::zero() {
            return None;
        }
        let ratio = self.0[best.0][best.1] / denom;
        let r = ratio.norm();
        if r <= T::zero() {
            return None;
        }
        let phase = ratio / r;
        (self.max_abs_diff(&other.scale(phase)) <= tol).then_some(phase)
    }

    pub fn equal_up_to_phase(&self, other: &Self, tol: T) -> bool {
        self.phase_to(other, tol).is_some()
    }
}

impl<T: Real, const N: usize> Mul for Matrix<T, N> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for k in 0..N {
                let a = self.0[i][k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..N {
                    m.0[i][j] = m.0[i][j] + a * rhs.0[k][j];
                }
            }
        }
        m
    }
}

impl<T, const N: usize> Index<(usize, usize)> for Matrix<T, N> {
    type Output = Complex<T>;

    fn index(&self, (r, c): (usize, usize)) -> &Complex<T> {
        &self.0[r][c]
    }
}

impl<T, const N: usize> IndexMut<(usize, usize)> for Matrix<T, N> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex<T> {
        &mut self.0[r][c]
    }
}

/// Kronecker product `a (x) b`; `a` acts on the more significant qubit.
pub fn kron<T: Real>(a: &Matrix<T, 2>, b: &Matrix<T, 2>) -> Matrix<T, 4> {
    let mut m = Matrix::<T, 4>::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    m.0[2 * i + k][2 * j + l] = a.0[i][j] * b.0[k][l];
                }
            }
        }
    }
    m
}

/// Splits a 4x4 local operator into `a (x) b` with `det(b) = 1`.
///
/// The input must be a tensor product within numerical noise; the caller is
/// expected to check the reconstruction.
pub fn kron_factor<T: Real>(m: &Matrix<T, 4>) -> (Matrix<T, 2>, Matrix<T, 2>) {
    let block = |p: usize, q: usize| {
        Matrix([
            [m.0[2 * p][2 * q], m.0[2 * p][2 * q + 1]],
            [m.0[2 * p + 1][2 * q], m.0[2 * p + 1][2 * q + 1]],
        ])
    };
    let mut best = (0, 0);
    let mut best_norm = T::zero();
    for p in 0..2 {
        for q in 0..2 {
            let b = block(p, q);
            let n = b.0.iter().flatten().fold(T::zero(), |acc, z| acc + z.norm_sqr());
            if n > best_norm {
                best_norm = n;
                best = (p, q);
            }
        }
    }
    let raw = block(best.0, best.1);
    let d = raw.det().sqrt();
    let b = raw.scale(d.inv());
    let b_adj = b.adjoint();
    let half = T::lit(0.5);
    let mut a = Matrix::<T, 2>::zeros();
    for p in 0..2 {
        for q in 0..2 {
            a.0[p][q] = (b_adj * block(p, q)).trace() * half;
        }
    }
    (a, b)
}

/// Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.
///
/// Returns the eigenvalues and a matrix whose columns are the corresponding
/// orthonormal eigenvectors.
pub fn symmetric_eigen<T: Real, const N: usize>(a: [[T; N]; N]) -> ([T; N], [[T; N]; N]) {
    let mut a = a;
    let mut v = [[T::zero(); N]; N];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = T::one();
    }
    for _sweep in 0..100 {
        let mut off = T::zero();
        for i in 0..N {
            for j in i + 1..N {
                off = off + a[i][j] * a[i][j];
            }
        }
        if off <= T::epsilon() * T::epsilon() * T::lit(1e-6) {
            break;
        }
        for p in 0..N {
            for q in p + 1..N {
                if a[p][q] == T::zero() {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (T::lit(2.0) * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..N {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..N {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let vkp = row[p];
                    let vkq = row[q];
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut eig = [T::zero(); N];
    for (i, e) in eig.iter_mut().enumerate() {
        *e = a[i][i];
    }
    (eig, v)
}

/// Standard single- and two-qubit gate matrices.
pub mod gates {
    use super::*;

    fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
        Complex::new(T::lit(re), T::lit(im))
    }

    pub fn pauli_x<T: Real>() -> Matrix<T, 2> {
        Matrix([[c(0., 0.), c(1., 0.)], [c(1., 0.), c(0., 0.)]])
    }

    pub fn pauli_y<T: Real>() -> Matrix<T, 2> {
        Matrix([[c(0., 0.), c(0., -1.)], [c(0., 1.), c(0., 0.)]])
    }

    pub fn pauli_z<T: Real>() -> Matrix<T, 2> {
        Matrix([[c(1., 0.), c(0., 0.)], [c(0., 0.), c(-1., 0.)]])
    }

    pub fn hadamard<T: Real>() -> Matrix<T, 2> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Matrix([[c(h, 0.), c(h, 0.)], [c(h, 0.), c(-h, 0.)]])
    }

    pub fn phase<T: Real>(lambda: T) -> Matrix<T, 2> {
        Matrix([
            [Complex::new(T::one(), T::zero()), Complex::new(T::zero(), T::zero())],
            [Complex::new(T::zero(), T::zero()), Complex::from_polar(T::one(), lambda)],
        ])
    }

    pub fn rx<T: Real>(theta: T) -> Matrix<T, 2> {
        let half = theta / T::lit(2.0);
        let (s, co) = half.sin_cos();
        let z = T::zero();
        Matrix([
            [Complex::new(co, z), Complex::new(z, -s)],
            [Complex::new(z, -s), Complex::new(co, z)],
        ])
    }

    pub fn ry<T: Real>(theta: T) -> Matrix<T, 2> {
        let half = theta / T::lit(2.0);
        let (s, co) = half.sin_cos();
        let z = T::zero();
        Matrix([
            [Complex::new(co, z), Complex::new(-s, z)],
            [Complex::new(s, z), Complex::new(co, z)],
        ])
    }

    pub fn rz<T: Real>(theta: T) -> Matrix<T, 2> {
        let half = theta / T::lit(2.0);
        let z = Complex::new(T::zero(), T::zero());
        Matrix([
            [Complex::from_polar(T::one(), -half), z],
            [z, Complex::from_polar(T::one(), half)],
        ])
    }

    pub fn u3<T: Real>(theta: T, phi: T, lambda: T) -> Matrix<T, 2> {
        let half = theta / T::lit(2.0);
        let (s, co) = half.sin_cos();
        Matrix([
            [
                Complex::new(co, T::zero()),
                -Complex::from_polar(s, lambda),
            ],
            [
                Complex::from_polar(s, phi),
                Complex::from_polar(co, phi + lambda),
            ],
        ])
    }

    /// CX with the control on the more significant qubit.
    pub fn cx<T: Real>() -> Matrix<T, 4> {
        let mut m = Matrix::zeros();
        for (r, col) in [0usize, 1, 3, 2].into_iter().enumerate() {
            m.0[r][col] = c(1., 0.);
        }
        m
    }

    /// CX with the control on the less significant qubit.
    pub fn cx_reversed<T: Real>() -> Matrix<T, 4> {
        let mut m = Matrix::zeros();
        for (r, col) in [0usize, 3, 2, 1].into_iter().enumerate() {
            m.0[r][col] = c(1., 0.);
        }
        m
    }

    pub fn cz<T: Real>() -> Matrix<T, 4> {
        let mut m = Matrix::identity();
        m.0[3][3] = c(-1., 0.);
        m
    }

    pub fn swap<T: Real>() -> Matrix<T, 4> {
        let mut m = Matrix::zeros();
        for (r, col) in [0usize, 2, 1, 3].into_iter().enumerate() {
            m.0[r][col] = c(1., 0.);
        }
        m
    }

    /// Extracts `(theta, phi, lambda)` such that `u3(theta, phi, lambda)`
    /// equals `m` up to a global phase.
    pub fn u3_angles<T: Real>(m: &Matrix<T, 2>) -> (T, T, T) {
        let a = m.0[0][0];
        let b = m.0[0][1];
        let cc = m.0[1][0];
        let d = m.0[1][1];
        let theta = T::lit(2.0) * cc.norm().atan2(a.norm());
        let eps = T::lit(1e-14);
        if cc.norm() <= eps && b.norm() <= eps {
            // diagonal: only phi + lambda is meaningful
            return (T::zero(), T::zero(), d.arg() - a.arg());
        }
        if a.norm() <= eps && d.norm() <= eps {
            // anti-diagonal: only phi - lambda is meaningful
            return (theta, cc.arg() - (-b).arg(), T::zero());
        }
        let phi = cc.arg() - a.arg();
        let lambda = (-b).arg() - a.arg();
        (theta, phi, lambda)
    }
}
