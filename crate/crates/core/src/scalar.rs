//! Real scalar abstraction shared by the numeric kernels (matrices, the
//! statevector oracle and two-qubit synthesis).

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Weyl-coordinate snapping threshold used when counting CX gates.
    const COORD_TOL: f64;
    /// Max-entry reconstruction tolerance for synthesised two-qubit circuits.
    const RECON_TOL: f64;
    /// Unitarity tolerance (max entry of |U^dagger U - I|).
    const UNITARY_TOL: f64;

    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal fits the scalar type")
    }
}

impl Real for f64 {
    const COORD_TOL: f64 = 1e-9;
    const RECON_TOL: f64 = 1e-7;
    const UNITARY_TOL: f64 = 1e-9;
}

impl Real for f32 {
    const COORD_TOL: f64 = 1e-4;
    const RECON_TOL: f64 = 1e-3;
    const UNITARY_TOL: f64 = 1e-5;
}

/// Wraps an angle into `(-pi, pi]`.
pub fn normalize_angle<T: Real>(theta: T) -> T {
    let two_pi = T::PI() + T::PI();
    let mut t = theta % two_pi;
    if t <= -T::PI() {
        t = t + two_pi;
    } else if t > T::PI() {
        t = t - two_pi;
    }
    t
}
