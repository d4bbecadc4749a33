//! Compilation toolkit for distributed quantum circuits.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod circuit;
pub mod distributor;
pub mod frontend;
pub mod harness;
pub mod linalg;
pub mod optimizer;
pub mod partitioner;
pub mod scalar;
pub mod sim;

pub use circuit::{Circuit, CircuitError, Gate, GateCounts, GateKind, RemoteKind, TelegateTag};
pub use scalar::Real;

pub type Complex = num_complex::Complex<f64>;
pub type Matrix2 = linalg::Matrix<f64, 2>;
pub type Matrix4 = linalg::Matrix<f64, 4>;
pub type StateVector = sim::StateVector<f64>;
pub type WeylCoordinates = optimizer::WeylCoordinates<f64>;
