//! Density-matrix encodings: an n-qubit matrix A with unit Frobenius
//! norm rides in the off-diagonal ancilla block of a density matrix on
//! 1 + n qubits,
//!
//! `rho = [[rho00, gamma A], [gamma A^dag, rho11]]`,
//!
//! and the weight gamma is the figure of merit: estimation cost scales
//! against 1/gamma, and gamma is capped by the Renyi-1/2 entropy of the
//! encoded matrix's singular spectrum.

use crate::qcore::{frobenius_norm, svd_sorted, CMat, C64, DensityMatrix, TOL_NORM};
use crate::{Error, Result};

/// A density matrix on 1 + n qubits whose upper-right ancilla block is
/// `gamma * A`.
#[derive(Debug, Clone)]
pub struct DmseEncoding {
    n: usize,
    gamma: f64,
    rho: DensityMatrix,
}

impl DmseEncoding {
    pub fn new(rho: DensityMatrix, gamma: f64) -> Result<Self> {
        let q = rho.qubits();
        if q < 2 {
            return Err(Error::arg("encoding needs an ancilla plus system"));
        }
        if !(gamma > 0.0) || gamma > 0.5 + TOL_NORM {
            return Err(Error::arg(format!(
                "weight gamma = {gamma} outside (0, 1/2]"
            )));
        }
        Ok(Self {
            n: q - 1,
            gamma,
            rho,
        })
    }

    /// System qubits (the ancilla is one more).
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn rho(&self) -> &DensityMatrix {
        &self.rho
    }

    /// 2^n x 2^n block of rho at ancilla entry (a, b).
    pub fn block(&self, a: usize, b: usize) -> CMat {
        let d = 1usize << self.n;
        CMat::from_fn(d, d, |i, j| self.rho.matrix()[(a * d + i, b * d + j)])
    }

    /// The encoded matrix, rho01 / gamma.
    pub fn encoded_matrix(&self) -> CMat {
        self.block(0, 1).map(|z| z / C64::new(self.gamma, 0.0))
    }

    /// The weight recovered from the encoding itself:
    /// sqrt(Tr(rho01 rho10)). Equals `gamma` whenever the encoded matrix
    /// has unit Frobenius norm.
    pub fn gamma_exact(&self) -> f64 {
        let p01 = self.block(0, 1);
        let p10 = self.block(1, 0);
        (p01 * p10).trace().re.max(0.0).sqrt()
    }
}

/// Largest-weight encoding of a unit-Frobenius-norm matrix. With
/// A = U S V^dag the density matrix is
/// `gamma [[U S U^dag, A], [A^dag, V S V^dag]]`, `gamma = 1/(2 tr S)`,
/// which meets the entropy cap `2^(-h_half/2 - 1)` exactly.
pub fn dmse_optimal(a: &CMat) -> Result<DmseEncoding> {
    let d = a.nrows();
    if a.ncols() != d {
        return Err(Error::dim("encoded matrix must be square"));
    }
    let norm = frobenius_norm(a);
    if (norm - 1.0).abs() > TOL_NORM {
        return Err(Error::arg(format!(
            "matrix Frobenius norm {norm} differs from 1; normalise first"
        )));
    }
    let (u, s, vt) = svd_sorted(a)?;
    let trace_s: f64 = s.iter().sum();
    let gamma = 1.0 / (2.0 * trace_s);
    let sm = CMat::from_fn(d, d, |i, j| {
        if i == j {
            C64::new(s[i], 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let upper_left = &u * &sm * u.adjoint();
    let lower_right = vt.adjoint() * &sm * &vt;
    let mut rho = CMat::zeros(2 * d, 2 * d);
    for i in 0..d {
        for j in 0..d {
            rho[(i, j)] = upper_left[(i, j)] * gamma;
            rho[(i, j + d)] = a[(i, j)] * gamma;
            rho[(i + d, j)] = a[(j, i)].conj() * gamma;
            rho[(i + d, j + d)] = lower_right[(i, j)] * gamma;
        }
    }
    DmseEncoding::new(DensityMatrix::new(rho)?, gamma)
}

/// Rank-one encoding from a pair of n-qubit pure states: the matrix
/// psi1 psi2^T (whose vectorisation is the product state
/// |psi1> (x) |psi2>) rides at weight 1/2 in the pure state
/// `(|0>|psi1> + |1>|psi2^*>) / sqrt(2)`.
pub fn dmse_initial_product(
    psi1: &crate::qcore::PureState,
    psi2: &crate::qcore::PureState,
) -> Result<DmseEncoding> {
    if psi1.qubits() != psi2.qubits() {
        return Err(Error::dim("product factors must share a register size"));
    }
    let d = psi1.dim();
    let mut amps = crate::qcore::CVec::zeros(2 * d);
    let w = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    for i in 0..d {
        amps[i] = w * psi1.amplitudes()[i];
        amps[d + i] = w * psi2.amplitudes()[i].conj();
    }
    let pure = crate::qcore::PureState::new(amps)?;
    DmseEncoding::new(pure.density(), 0.5)
}

/// Consistency check: residual of the off-diagonal block against
/// `gamma * A`, plus the weight recovered from the block itself.
pub fn verify_dmse(enc: &DmseEncoding, a: &CMat) -> Result<f64> {
    if a.nrows() != 1 << enc.n() || a.ncols() != a.nrows() {
        return Err(Error::dim("reference matrix has the wrong shape"));
    }
    let resid = frobenius_norm(&(enc.block(0, 1) - a.scale(enc.gamma())));
    Ok(resid)
}
