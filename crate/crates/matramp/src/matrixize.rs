//! The operator/state dictionary: a matrix O on n qubits corresponds to
//! the vector |O> on 2n qubits with amplitude O[i,j] at basis index
//! i * 2^n + j (row-major). Under this dictionary operator overlaps
//! become state overlaps, <B|A> = Tr(B^dag A), and the Schmidt spectrum
//! across the register cut equals the singular-value spectrum of the
//! matrix.

use crate::qcore::{
    frobenius_norm, inner_product, qubits_for_dim, singular_values_desc, CMat, CVec, C64,
    PureState, TOL_NORM,
};
use crate::{Error, Result};

/// Row-major flatten of a square power-of-two matrix.
pub fn vectorize(o: &CMat) -> Result<CVec> {
    let d = o.nrows();
    if o.ncols() != d {
        return Err(Error::dim("vectorize needs a square matrix"));
    }
    qubits_for_dim(d)?;
    let mut v = CVec::zeros(d * d);
    for i in 0..d {
        for j in 0..d {
            v[i * d + j] = o[(i, j)];
        }
    }
    Ok(v)
}

/// Inverse of `vectorize`: reshape a length-4^n vector into 2^n x 2^n.
pub fn matrixize(v: &CVec) -> Result<CMat> {
    let len = v.len();
    let d = (len as f64).sqrt().round() as usize;
    if d * d != len || !d.is_power_of_two() {
        return Err(Error::dim(format!(
            "length {len} is not the square of a power of two"
        )));
    }
    let mut o = CMat::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            o[(i, j)] = v[i * d + j];
        }
    }
    Ok(o)
}

/// <B|A> computed as Tr(B^dag A).
pub fn overlap_via_trace(b: &CMat, a: &CMat) -> Result<C64> {
    if b.nrows() != a.nrows() || b.ncols() != a.ncols() {
        return Err(Error::dim("overlap needs matching shapes"));
    }
    let tr = (b.adjoint() * a).trace();
    #[cfg(debug_assertions)]
    {
        // Dual route through the vector picture; the two must agree.
        if b.nrows() == b.ncols() && b.nrows().is_power_of_two() {
            let vb = vectorize(b).expect("square power-of-two checked");
            let va = vectorize(a).expect("square power-of-two checked");
            debug_assert!((inner_product(&vb, &va) - tr).norm() <= 1e-10 * (1.0 + tr.norm()));
        }
    }
    Ok(tr)
}

/// Renyi data of the Schmidt spectrum across the upper/lower cut.
#[derive(Debug, Clone)]
pub struct EntropyReport {
    /// Singular values of the matrixised state, descending.
    pub schmidt: Vec<f64>,
    /// Min-entropy -log2(max alpha^2).
    pub h_inf: f64,
    /// Renyi-1/2 entropy 2 log2(sum alpha).
    pub h_half: f64,
    /// 2^(h_inf / 2): the reachable one-norm payoff of the spectrum.
    pub lambda_max: f64,
    /// 2^(-h_half/2 - 1): the reachable encoding weight.
    pub gamma_max: f64,
}

/// A pure state on 2n qubits read as an n-qubit operator. The leading n
/// qubits form the upper subsystem (row index), the trailing n the lower
/// (column index).
#[derive(Debug, Clone)]
pub struct BipartiteState {
    n: usize,
    state: PureState,
}

impl BipartiteState {
    pub fn new(state: PureState) -> Result<Self> {
        let q = state.qubits();
        if q % 2 != 0 || q == 0 {
            return Err(Error::arg(format!(
                "bipartite state needs an even positive qubit count, got {q}"
            )));
        }
        Ok(Self { n: q / 2, state })
    }

    /// Wraps the vectorisation of a unit-Frobenius-norm matrix.
    pub fn from_operator(o: &CMat) -> Result<Self> {
        let norm = frobenius_norm(o);
        if (norm - 1.0).abs() > TOL_NORM {
            return Err(Error::arg(format!(
                "operator Frobenius norm {norm} differs from 1; normalise first"
            )));
        }
        Self::new(PureState::new(vectorize(o)?)?)
    }

    /// Qubits per side.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn state(&self) -> &PureState {
        &self.state
    }

    pub fn into_state(self) -> PureState {
        self.state
    }

    /// The matrix whose vectorisation this state is.
    pub fn to_matrix(&self) -> CMat {
        matrixize(self.state.amplitudes()).expect("length is 4^n by construction")
    }

    /// Schmidt coefficients across the cut, descending, zeros included.
    pub fn schmidt_coefficients(&self) -> Result<Vec<f64>> {
        let m = self.to_matrix();
        Ok(singular_values_desc(&m)?)
    }

    pub fn entropy_report(&self) -> Result<EntropyReport> {
        entropy_report(self)
    }
}

/// Entropy data for a bipartite state; the chain
/// 0 <= h_inf <= h_half <= n always holds.
pub fn entropy_report(state: &BipartiteState) -> Result<EntropyReport> {
    let schmidt = state.schmidt_coefficients()?;
    let amax = schmidt.first().copied().unwrap_or(0.0);
    if amax <= 0.0 {
        return Err(Error::Numerical("empty Schmidt spectrum".into()));
    }
    let sum: f64 = schmidt.iter().sum();
    let h_inf = -(amax * amax).log2();
    let h_half = 2.0 * sum.log2();
    Ok(EntropyReport {
        schmidt,
        h_inf,
        h_half,
        lambda_max: (h_inf / 2.0).exp2(),
        gamma_max: (-h_half / 2.0 - 1.0).exp2(),
    })
}
