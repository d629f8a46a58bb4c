//! Pure states, density matrices, Schmidt decompositions, purification.

use super::matrix::{frobenius_norm, svd_sorted, CMat, CVec, C64};
use super::{check_qubit_budget, qubits_for_dim, TOL_NORM, TOL_RANK};
use crate::{Error, Result};

/// Normalised state vector on a power-of-two register.
/// Qubit 0 is the most significant bit of the basis index.
#[derive(Debug, Clone)]
pub struct PureState {
    qubits: usize,
    amps: CVec,
}

impl PureState {
    pub fn new(amps: CVec) -> Result<Self> {
        let qubits = qubits_for_dim(amps.len())?;
        check_qubit_budget(qubits)?;
        let norm = amps.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > TOL_NORM {
            return Err(Error::arg(format!(
                "state vector norm {norm} differs from 1 beyond tolerance"
            )));
        }
        Ok(Self { qubits, amps })
    }

    /// Normalises a nonzero vector and wraps it.
    pub fn normalized(mut amps: CVec) -> Result<Self> {
        let norm = amps.norm();
        if norm <= TOL_RANK || !norm.is_finite() {
            return Err(Error::arg("cannot normalise a (near-)zero vector"));
        }
        amps /= C64::new(norm, 0.0);
        Self::new(amps)
    }

    /// Computational basis state |index> on `qubits` qubits.
    pub fn basis(qubits: usize, index: usize) -> Result<Self> {
        check_qubit_budget(qubits)?;
        let dim = 1usize << qubits;
        if index >= dim {
            return Err(Error::arg(format!(
                "basis index {index} out of range for {qubits} qubits"
            )));
        }
        let mut amps = CVec::zeros(dim);
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self { qubits, amps })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &CVec {
        &self.amps
    }

    pub fn into_amplitudes(self) -> CVec {
        self.amps
    }

    /// |psi><psi| as a density matrix.
    pub fn density(&self) -> DensityMatrix {
        let rho = &self.amps * self.amps.adjoint();
        DensityMatrix {
            qubits: self.qubits,
            rho,
        }
    }

    /// Tensor product; `self` occupies the more significant bits.
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        check_qubit_budget(self.qubits + other.qubits)?;
        Ok(PureState {
            qubits: self.qubits + other.qubits,
            amps: self.amps.kronecker(&other.amps),
        })
    }
}

/// Hermitian, positive semidefinite, unit-trace matrix on a register.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    qubits: usize,
    rho: CMat,
}

impl DensityMatrix {
    /// Validating constructor: Hermitian within tolerance, eigenvalues
    /// above `-TOL_NORM`, trace within tolerance of one.
    pub fn new(rho: CMat) -> Result<Self> {
        let qubits = qubits_for_dim(rho.nrows())?;
        check_qubit_budget(qubits)?;
        if rho.nrows() != rho.ncols() {
            return Err(Error::dim("density matrix must be square"));
        }
        let herm_res = frobenius_norm(&(rho.adjoint() - &rho));
        if herm_res > TOL_NORM * (rho.nrows() as f64).sqrt() {
            return Err(Error::NotDensity(format!(
                "hermiticity residual {herm_res:.3e}"
            )));
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > 1e-8 || tr.im.abs() > 1e-8 {
            return Err(Error::NotDensity(format!("trace {tr} differs from 1")));
        }
        let eigs = nalgebra::SymmetricEigen::new(rho.clone()).eigenvalues;
        if let Some(min) = eigs.iter().cloned().reduce(f64::min) {
            if min < -1e-8 {
                return Err(Error::NotDensity(format!("negative eigenvalue {min:.3e}")));
            }
        }
        Ok(Self { qubits, rho })
    }

    /// Trusted constructor for matrices that are density matrices by
    /// construction (channel outputs, convex mixtures of valid inputs).
    pub(crate) fn from_trusted(qubits: usize, rho: CMat) -> Self {
        debug_assert_eq!(rho.nrows(), 1usize << qubits);
        Self { qubits, rho }
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.rho
    }

    pub fn purity(&self) -> f64 {
        (&self.rho * &self.rho).trace().re
    }

    /// Eigenvalues above `TOL_RANK`.
    pub fn rank(&self) -> usize {
        let eigs = nalgebra::SymmetricEigen::new(self.rho.clone()).eigenvalues;
        eigs.iter().filter(|&&e| e > TOL_RANK).count()
    }

    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        check_qubit_budget(self.qubits + other.qubits)?;
        Ok(DensityMatrix {
            qubits: self.qubits + other.qubits,
            rho: self.rho.kronecker(&other.rho),
        })
    }
}

/// Schmidt data of a pure state split at a register cut.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    /// Coefficients in descending order; squares sum to one.
    pub coefficients: Vec<f64>,
    /// Orthonormal factors on the leading (more significant) register,
    /// one column per retained coefficient.
    pub left_vectors: CMat,
    /// Orthonormal factors on the trailing register.
    pub right_vectors: CMat,
    /// Number of coefficients above the rank tolerance.
    pub rank: usize,
}

/// Schmidt decomposition across the cut after `cut` qubits: qubits
/// `[0, cut)` form the left factor, `[cut, total)` the right.
pub fn schmidt(state: &PureState, cut: usize) -> Result<SchmidtDecomposition> {
    let q = state.qubits();
    if cut == 0 || cut >= q {
        return Err(Error::arg(format!(
            "cut {cut} must split a {q}-qubit register into two nonempty halves"
        )));
    }
    let dl = 1usize << cut;
    let dr = 1usize << (q - cut);
    // Row-major reshape: amplitude of |i>|j> sits at index i*dr + j.
    let mut m = CMat::zeros(dl, dr);
    for i in 0..dl {
        for j in 0..dr {
            m[(i, j)] = state.amplitudes()[i * dr + j];
        }
    }
    let (u, s, vt) = svd_sorted(&m)?;
    let rank = s.iter().filter(|&&x| x > TOL_RANK).count();
    let kept = rank.max(1);
    let mut left = CMat::zeros(dl, kept);
    let mut right = CMat::zeros(dr, kept);
    // Right factors are the rows of v_t, so that
    // |psi> = sum_k s_k |left_k> (x) |right_k> holds exactly.
    for k in 0..kept {
        for i in 0..dl {
            left[(i, k)] = u[(i, k)];
        }
        for j in 0..dr {
            right[(j, k)] = vt[(k, j)];
        }
    }
    Ok(SchmidtDecomposition {
        coefficients: s[..kept].to_vec(),
        left_vectors: left,
        right_vectors: right,
        rank,
    })
}

impl SchmidtDecomposition {
    /// Rebuild the state vector; inverse of `schmidt` up to tolerance.
    pub fn reconstruct(&self) -> Result<PureState> {
        let dl = self.left_vectors.nrows();
        let dr = self.right_vectors.nrows();
        let mut amps = CVec::zeros(dl * dr);
        for (k, &c) in self.coefficients.iter().enumerate() {
            let l = self.left_vectors.column(k);
            let r = self.right_vectors.column(k);
            for i in 0..dl {
                for j in 0..dr {
                    amps[i * dr + j] += C64::new(c, 0.0) * l[i] * r[j];
                }
            }
        }
        PureState::new(amps)
    }
}

/// Partial trace keeping the listed qubits (ascending order required).
/// The output register keeps the relative order of the kept qubits.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let q = rho.qubits();
    if keep.is_empty() {
        return Err(Error::arg("partial trace must keep at least one qubit"));
    }
    if keep.windows(2).any(|w| w[1] <= w[0]) || *keep.last().unwrap() >= q {
        return Err(Error::arg(format!(
            "keep list must be strictly ascending and within 0..{q}"
        )));
    }
    let traced: Vec<usize> = (0..q).filter(|i| !keep.contains(i)).collect();
    let kq = keep.len();
    let tq = traced.len();
    let kdim = 1usize << kq;
    let tdim = 1usize << tq;

    // Compose a full basis index from kept bits and traced bits. Bit b of
    // the register sits at shift (q-1-b) because qubit 0 is most
    // significant.
    let fuse = |kept_val: usize, traced_val: usize| -> usize {
        let mut idx = 0usize;
        for (pos, &b) in keep.iter().enumerate() {
            let bit = (kept_val >> (kq - 1 - pos)) & 1;
            idx |= bit << (q - 1 - b);
        }
        for (pos, &b) in traced.iter().enumerate() {
            let bit = (traced_val >> (tq - 1 - pos)) & 1;
            idx |= bit << (q - 1 - b);
        }
        idx
    };

    let mut out = CMat::zeros(kdim, kdim);
    for r in 0..kdim {
        for c in 0..kdim {
            let mut acc = C64::new(0.0, 0.0);
            for t in 0..tdim {
                acc += rho.matrix()[(fuse(r, t), fuse(c, t))];
            }
            out[(r, c)] = acc;
        }
    }
    Ok(DensityMatrix::from_trusted(kq, out))
}

/// Minimal-ancilla purification with the ancilla register appended (least
/// significant bits): |psi> = sum_i sqrt(p_i) |e_i> (x) |i>.
pub fn purify(rho: &DensityMatrix) -> Result<PureState> {
    let (state, _m) = purify_with_layout(rho, false)?;
    Ok(state)
}

/// Purification with the ancilla register prepended instead; returns the
/// state and the ancilla width. Rank-one inputs get zero ancilla qubits.
pub fn purify_ancilla_first(rho: &DensityMatrix) -> Result<(PureState, usize)> {
    purify_with_layout(rho, true)
}

fn purify_with_layout(rho: &DensityMatrix, ancilla_first: bool) -> Result<(PureState, usize)> {
    let eig = nalgebra::SymmetricEigen::new(rho.matrix().clone());
    let mut pairs: Vec<(f64, usize)> = eig
        .eigenvalues
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, e)| (e, i))
        .collect();
    pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let kept: Vec<(f64, usize)> = pairs.into_iter().filter(|&(e, _)| e > TOL_RANK).collect();
    if kept.is_empty() {
        return Err(Error::NotDensity("matrix has no positive eigenvalues".into()));
    }
    let rank = kept.len();
    let m = if rank == 1 {
        0
    } else {
        (usize::BITS - (rank - 1).leading_zeros()) as usize
    };
    check_qubit_budget(rho.qubits() + m)?;
    let sys_dim = rho.dim();
    let anc_dim = 1usize << m;
    let mut amps = CVec::zeros(sys_dim * anc_dim);
    for (slot, &(p, col)) in kept.iter().enumerate() {
        let w = C64::new(p.sqrt(), 0.0);
        let v = eig.eigenvectors.column(col);
        for s in 0..sys_dim {
            let idx = if ancilla_first {
                slot * sys_dim + s
            } else {
                s * anc_dim + slot
            };
            amps[idx] += w * v[s];
        }
    }
    // Eigenvalues of a valid density matrix sum to one; renormalise away
    // the last-bit drift so the constructor accepts the vector.
    Ok((PureState::normalized(amps)?, m))
}
