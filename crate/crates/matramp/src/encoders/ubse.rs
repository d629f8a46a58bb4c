//! Unitary block encodings built from linear combinations of unitaries.
//!
//! A matrix B with unit Frobenius norm rides in the ancilla-zero block
//! of a unitary on n + k qubits: `(I (x) <0|_k) U (I (x) |0>_k) =
//! lambda B` with scale `lambda <= 2^{n/2}`. The combination
//! `sum_i c_i V_i` realises `lambda = 2^{n/2} / |c|_1` via the usual
//! prepare/select/unprepare sandwich on a k-qubit ancilla.

use crate::matrixize::{vectorize, BipartiteState};
use crate::qcore::{
    check_qubit_budget, frobenius_norm, identity, is_unitary, pauli, qubits_for_dim, tensor,
    unitary_with_first_column, CMat, CVec, C64, PureState, TOL_NORM,
};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Bell pair species for one upper/lower qubit pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BellLabel {
    #[serde(rename = "phi+")]
    PhiPlus,
    #[serde(rename = "phi-")]
    PhiMinus,
    #[serde(rename = "psi+")]
    PsiPlus,
    #[serde(rename = "psi-")]
    PsiMinus,
}

impl BellLabel {
    /// The one-qubit factor whose scaled vectorisation is this Bell pair:
    /// the matrix picture of the pair is `factor / sqrt(2)`.
    pub fn factor(self) -> CMat {
        match self {
            BellLabel::PhiPlus => pauli('I').unwrap(),
            BellLabel::PhiMinus => pauli('Z').unwrap(),
            BellLabel::PsiPlus => pauli('X').unwrap(),
            BellLabel::PsiMinus => pauli('Y').unwrap().map(|z| z * C64::new(0.0, 1.0)),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "phi+" => Ok(BellLabel::PhiPlus),
            "phi-" => Ok(BellLabel::PhiMinus),
            "psi+" => Ok(BellLabel::PsiPlus),
            "psi-" => Ok(BellLabel::PsiMinus),
            other => Err(Error::Parse(format!("unknown bell label {other:?}"))),
        }
    }
}

/// Unitary on n + k qubits carrying `lambda B` in its ancilla-zero block.
#[derive(Debug, Clone)]
pub struct UbseEncoding {
    n: usize,
    k: usize,
    lambda: f64,
    unitary: CMat,
}

impl UbseEncoding {
    /// Wraps a unitary whose ancilla-zero block has Frobenius norm
    /// lambda (so the encoded matrix has unit norm).
    pub fn new(n: usize, k: usize, lambda: f64, unitary: CMat) -> Result<Self> {
        check_qubit_budget(n + k)?;
        if unitary.nrows() != 1usize << (n + k) {
            return Err(Error::dim(format!(
                "unitary has dimension {}, want 2^{}",
                unitary.nrows(),
                n + k
            )));
        }
        if !is_unitary(&unitary, TOL_NORM) {
            return Err(Error::NotUnitary("block encoding".into()));
        }
        if !(lambda > 0.0) {
            return Err(Error::arg(format!("scale lambda = {lambda} must be positive")));
        }
        let enc = Self {
            n,
            k,
            lambda,
            unitary,
        };
        let bn = frobenius_norm(&enc.block());
        if (bn - lambda).abs() > TOL_NORM * (1.0 + lambda) {
            return Err(Error::arg(format!(
                "block norm {bn} disagrees with lambda {lambda}; encoded matrix would not \
                 be normalised"
            )));
        }
        Ok(enc)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn unitary(&self) -> &CMat {
        &self.unitary
    }

    /// `(I (x) <0|_k) U (I (x) |0>_k)`: with the ancilla trailing, entry
    /// (i, j) of the block sits at (i 2^k, j 2^k).
    pub fn block(&self) -> CMat {
        let d = 1usize << self.n;
        let step = 1usize << self.k;
        CMat::from_fn(d, d, |i, j| self.unitary[(i * step, j * step)])
    }

    /// The encoded matrix B = block / lambda.
    pub fn encoded_matrix(&self) -> CMat {
        self.block().map(|z| z / C64::new(self.lambda, 0.0))
    }

    /// The encoded matrix as a state on 2n qubits.
    pub fn encoded_state(&self) -> Result<BipartiteState> {
        BipartiteState::new(PureState::new(vectorize(&self.encoded_matrix())?)?)
    }
}

/// Block encoding of `sum_i c_i V_i` from unitaries V_i on n qubits. The
/// combination must have Frobenius norm 2^{n/2} (within tolerance) so
/// that the encoded matrix is a normalised state in the vector picture;
/// the scale is then `lambda = 2^{n/2} / sum_i |c_i|`.
pub fn ubse_from_decomposition(terms: &[(C64, CMat)]) -> Result<UbseEncoding> {
    if terms.is_empty() {
        return Err(Error::arg("need at least one term"));
    }
    let d = terms[0].1.nrows();
    let n = qubits_for_dim(d)?;
    let mut one_norm = 0.0f64;
    let mut combo = CMat::zeros(d, d);
    for (c, v) in terms {
        if v.nrows() != d || v.ncols() != d {
            return Err(Error::dim("terms must share a dimension"));
        }
        if !is_unitary(v, TOL_NORM) {
            return Err(Error::NotUnitary("combination term".into()));
        }
        if c.norm() <= TOL_NORM {
            return Err(Error::arg("zero coefficients are not allowed"));
        }
        one_norm += c.norm();
        combo += v.map(|z| z * c);
    }
    let combo_norm = frobenius_norm(&combo);
    let target = (d as f64).sqrt();
    if (combo_norm - target).abs() > 1e-8 * target {
        return Err(Error::arg(format!(
            "combination has Frobenius norm {combo_norm:.12}, want 2^(n/2) = {target:.12} \
             so the encoded matrix is a unit state"
        )));
    }
    let lambda = target / one_norm;

    if terms.len() == 1 {
        let (c, v) = &terms[0];
        let phase = c / C64::new(c.norm(), 0.0);
        return UbseEncoding::new(n, 0, lambda, v.map(|z| z * phase));
    }

    let k = (usize::BITS - (terms.len() - 1).leading_zeros()) as usize;
    check_qubit_budget(n + k)?;
    let ka = 1usize << k;
    // Prepare rotates |0> onto the weight distribution; padded slots get
    // zero weight and identity select terms.
    let mut col = CVec::zeros(ka);
    for (i, (c, _)) in terms.iter().enumerate() {
        col[i] = C64::new((c.norm() / one_norm).sqrt(), 0.0);
    }
    let t = unitary_with_first_column(&col)?;
    let mut select = CMat::zeros(d * ka, d * ka);
    for i in 0..ka {
        let v = if i < terms.len() {
            let (c, v) = &terms[i];
            let phase = c / C64::new(c.norm(), 0.0);
            v.map(|z| z * phase)
        } else {
            identity(d)
        };
        // System leading, ancilla trailing: entry ((r, i), (s, i)).
        for r in 0..d {
            for s in 0..d {
                select[(r * ka + i, s * ka + i)] = v[(r, s)];
            }
        }
    }
    let tfull = tensor(&identity(d), &t)?;
    let u = tfull.adjoint() * select * &tfull;
    UbseEncoding::new(n, k, lambda, u)
}

/// Ancilla-free encoding from a Bell-label string: pair i of the doubled
/// register holds the labelled Bell state, the encoded matrix is the
/// tensor product of the per-pair factors over sqrt(2) each, and the
/// scale is the maximal `lambda = 2^{n/2}`.
pub fn ubse_from_bell_label(labels: &[BellLabel]) -> Result<UbseEncoding> {
    if labels.is_empty() {
        return Err(Error::arg("need at least one bell label"));
    }
    let n = labels.len();
    check_qubit_budget(2 * n)?;
    let mut u = CMat::identity(1, 1);
    for l in labels {
        u = tensor(&u, &l.factor())?;
    }
    UbseEncoding::new(n, 0, ((1usize << n) as f64).sqrt(), u)
}

/// The 2n-qubit state whose matrix picture is the Bell-label product:
/// the vectorisation of `2^{-n/2} (x)_i factor_i`.
pub fn bell_label_state(labels: &[BellLabel]) -> Result<PureState> {
    let enc = ubse_from_bell_label(labels)?;
    Ok(enc.encoded_state()?.into_state())
}

/// Residual of the block against `lambda * B` for a reference matrix B.
pub fn verify_ubse(enc: &UbseEncoding, b: &CMat) -> Result<f64> {
    if b.nrows() != 1usize << enc.n() || b.ncols() != b.nrows() {
        return Err(Error::dim("reference matrix has the wrong shape"));
    }
    Ok(frobenius_norm(&(enc.block() - b.scale(enc.lambda()))))
}
