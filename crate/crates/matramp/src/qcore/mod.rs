//! Core dense linear algebra and quantum state plumbing.
//!
//! Conventions used across the crate:
//! - qubit 0 is the most significant bit of a basis index (big-endian), so
//!   a register prepended with `tensor` keeps its index contiguous;
//! - matrices are `nalgebra::DMatrix<Complex64>` and logical indexing is
//!   row-major: entry `(i, j)` of an operator maps basis `|j>` to `|i>`;
//! - tolerances are fixed crate-wide rather than per call site.

mod channel;
mod matrix;
mod random;
mod state;
mod statevec;

pub use channel::{apply_channel, choi_matrix, KrausChannel};
pub use matrix::{
    dagger, embed_at, frobenius_norm, identity, is_hermitian, is_unitary, pauli,
    singular_values_desc, spectral_norm, svd_sorted, tensor, tensor_all, trace_norm,
    unitary_with_first_column, CMat, CVec, C64,
};
pub use random::{
    haar_random_unitary, random_density_matrix, random_kraus_channel, random_pure_state,
    substream, RngStream,
};
pub use state::{
    partial_trace, purify, purify_ancilla_first, schmidt, DensityMatrix, PureState,
    SchmidtDecomposition,
};
pub use statevec::{
    apply_matrix_on_trailing, apply_one_qubit, apply_two_qubit, basis_state, inner_product,
    move_block_to_front,
};

use std::sync::OnceLock;

/// Absolute tolerance for norm-level checks (unitarity, trace, residuals).
pub const TOL_NORM: f64 = 1e-10;

/// Threshold below which singular values and eigenvalues count as zero.
pub const TOL_RANK: f64 = 1e-12;

const DEFAULT_MAX_QUBITS: usize = 16;

/// Hard cap on register width for dense objects. Defaults to 16 qubits and
/// can be raised or lowered with the `MATRAMP_MAX_QUBITS` environment
/// variable (read once per process).
pub fn max_qubits() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("MATRAMP_MAX_QUBITS")
            .ok()
            .and_then(|s| s.parse::<usize>().ok())
            .unwrap_or(DEFAULT_MAX_QUBITS)
    })
}

/// Number of qubits for a dimension that must be a power of two.
pub fn qubits_for_dim(dim: usize) -> crate::Result<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(crate::Error::dim(format!(
            "dimension {dim} is not a positive power of two"
        )));
    }
    Ok(dim.trailing_zeros() as usize)
}

/// Guard used before building any object on `q` qubits.
pub fn check_qubit_budget(q: usize) -> crate::Result<()> {
    if q > max_qubits() {
        return Err(crate::Error::ResourceLimit(format!(
            "register of {q} qubits exceeds the cap of {} (set MATRAMP_MAX_QUBITS to override)",
            max_qubits()
        )));
    }
    Ok(())
}
