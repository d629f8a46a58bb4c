//! Dense simulation of matrix-as-state encodings and the estimation
//! protocols they enable.
//!
//! The pipeline: an n-qubit operator B is carried either by a purified
//! density encoding of a related matrix A (with weight gamma) or by a
//! unitary block encoding with scale lambda; overlaps Tr(B^dag A) then
//! become amplitudes of small circuits built from those encodings, and
//! the estimators measure them at one of two query costs, linear or
//! quadratic in the target precision. Everything here is exact dense
//! linear algebra at desk scale (registers up to 16 qubits) with seeded
//! sampling, aimed at benchmarking query counts rather than at large
//! simulations.

pub mod encoders;
pub mod error;
pub mod estimators;
pub mod experiments;
pub mod matrixize;
pub mod qcore;
pub mod verify;

pub use error::{Error, Result};
