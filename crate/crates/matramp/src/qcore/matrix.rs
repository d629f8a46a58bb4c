//! Dense complex matrices and the handful of decompositions everything
//! else is built from.

use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub fn identity(dim: usize) -> CMat {
    CMat::identity(dim, dim)
}

pub fn dagger(m: &CMat) -> CMat {
    m.adjoint()
}

/// Single-qubit Pauli matrix by letter (I, X, Y, Z).
pub fn pauli(label: char) -> Result<CMat> {
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let m = match label {
        'I' => CMat::from_row_slice(2, 2, &[one, z, z, one]),
        'X' => CMat::from_row_slice(2, 2, &[z, one, one, z]),
        'Y' => CMat::from_row_slice(2, 2, &[z, -i, i, z]),
        'Z' => CMat::from_row_slice(2, 2, &[one, z, z, -one]),
        _ => return Err(Error::arg(format!("unknown Pauli letter '{label}'"))),
    };
    Ok(m)
}

/// Kronecker product `a (x) b`; `a`'s qubits become the more significant
/// bits. Fails if the result would exceed the qubit budget.
pub fn tensor(a: &CMat, b: &CMat) -> Result<CMat> {
    let qa = super::qubits_for_dim(a.nrows())?;
    let qb = super::qubits_for_dim(b.nrows())?;
    super::check_qubit_budget(qa + qb)?;
    Ok(a.kronecker(b))
}

/// Kronecker product of a list, left to right.
pub fn tensor_all(ms: &[&CMat]) -> Result<CMat> {
    let mut it = ms.iter();
    let first = it
        .next()
        .ok_or_else(|| Error::arg("tensor_all needs at least one factor"))?;
    let mut acc = (*first).clone();
    for m in it {
        acc = tensor(&acc, m)?;
    }
    Ok(acc)
}

/// Dense embedding of a small operator into a `qubits`-wide register:
/// `positions[k]` names the register qubit carrying bit k (most
/// significant first) of the operator's own basis. Qubits off the listed
/// positions are untouched. An empty position list embeds a 1x1 scalar
/// as `g[0,0] * I`.
pub fn embed_at(g: &CMat, qubits: usize, positions: &[usize]) -> Result<CMat> {
    super::check_qubit_budget(qubits)?;
    let m = positions.len();
    if g.nrows() != 1usize << m || g.ncols() != g.nrows() {
        return Err(Error::dim(format!(
            "operator of dimension {} does not fit {m} positions",
            g.nrows()
        )));
    }
    let mut seen = vec![false; qubits];
    for &p in positions {
        if p >= qubits {
            return Err(Error::arg(format!("position {p} out of range")));
        }
        if seen[p] {
            return Err(Error::arg(format!("position {p} repeated")));
        }
        seen[p] = true;
    }
    let d = 1usize << qubits;
    let shifts: Vec<usize> = positions.iter().map(|&p| qubits - 1 - p).collect();
    let posmask: usize = shifts.iter().map(|&s| 1usize << s).sum();
    let extract = |idx: usize| -> usize {
        let mut sub = 0usize;
        for (k, &s) in shifts.iter().enumerate() {
            sub |= ((idx >> s) & 1) << (m - 1 - k);
        }
        sub
    };
    let spread = |sub: usize| -> usize {
        let mut idx = 0usize;
        for (k, &s) in shifts.iter().enumerate() {
            idx |= ((sub >> (m - 1 - k)) & 1) << s;
        }
        idx
    };
    let mut full = CMat::zeros(d, d);
    let sub_dim = 1usize << m;
    for i in 0..d {
        let isub = extract(i);
        let rest = i & !posmask;
        for jsub in 0..sub_dim {
            full[(i, rest | spread(jsub))] = g[(isub, jsub)];
        }
    }
    Ok(full)
}

pub fn frobenius_norm(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn is_unitary(m: &CMat, tol: f64) -> bool {
    if m.nrows() != m.ncols() {
        return false;
    }
    let d = m.nrows();
    let res = m.adjoint() * m - identity(d);
    frobenius_norm(&res) <= tol * (d as f64).sqrt()
}

pub fn is_hermitian(m: &CMat, tol: f64) -> bool {
    if m.nrows() != m.ncols() {
        return false;
    }
    frobenius_norm(&(m.adjoint() - m)) <= tol * (m.nrows() as f64).sqrt()
}

/// Singular values in descending order.
pub fn singular_values_desc(m: &CMat) -> Result<Vec<f64>> {
    let svd = m
        .clone()
        .try_svd(false, false, f64::EPSILON, 0)
        .ok_or_else(|| Error::Numerical("SVD did not converge".into()))?;
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(s)
}

/// Full SVD `m = u * diag(s) * v_t` with singular values sorted in
/// descending order and the columns of `u` / rows of `v_t` permuted to
/// match. Ties keep the solver's relative order.
pub fn svd_sorted(m: &CMat) -> Result<(CMat, Vec<f64>, CMat)> {
    let svd = m
        .clone()
        .try_svd(true, true, f64::EPSILON, 0)
        .ok_or_else(|| Error::Numerical("SVD did not converge".into()))?;
    let u = svd.u.ok_or_else(|| Error::Numerical("SVD missing U".into()))?;
    let v_t = svd
        .v_t
        .ok_or_else(|| Error::Numerical("SVD missing V^H".into()))?;
    let s: Vec<f64> = svd.singular_values.iter().copied().collect();
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.sort_by(|&a, &b| s[b].partial_cmp(&s[a]).unwrap().then(a.cmp(&b)));
    let u_sorted = CMat::from_columns(&order.iter().map(|&j| u.column(j)).collect::<Vec<_>>());
    let vt_rows: Vec<_> = order.iter().map(|&j| v_t.row(j)).collect();
    let v_t_sorted = CMat::from_rows(&vt_rows);
    let s_sorted: Vec<f64> = order.iter().map(|&j| s[j]).collect();
    Ok((u_sorted, s_sorted, v_t_sorted))
}

/// Trace norm (sum of singular values).
pub fn trace_norm(m: &CMat) -> Result<f64> {
    Ok(singular_values_desc(m)?.iter().sum())
}

/// Spectral norm (largest singular value).
pub fn spectral_norm(m: &CMat) -> Result<f64> {
    Ok(singular_values_desc(m)?
        .first()
        .copied()
        .unwrap_or(0.0))
}

/// Any unitary whose first column equals the given unit vector, built from
/// a Householder reflection. Used to prepare coefficient registers.
pub fn unitary_with_first_column(col: &CVec) -> Result<CMat> {
    let d = col.len();
    let norm = col.norm();
    if (norm - 1.0).abs() > super::TOL_NORM {
        return Err(Error::arg(format!(
            "first column must be a unit vector, got norm {norm}"
        )));
    }
    // Householder: reflect e0 onto col. With v = col - alpha e0 for a
    // phase-matched alpha the reflection is exactly unitary and maps e0 to
    // col up to the phase alpha, which we fold back in.
    let mut e0 = CVec::zeros(d);
    e0[0] = C64::new(1.0, 0.0);
    let c0 = col[0];
    let alpha = if c0.norm() > 1e-15 {
        c0 / c0.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    let w = col - e0.scale(1.0) * alpha;
    let wn = w.norm();
    let h = if wn < 1e-15 {
        identity(d)
    } else {
        let w = w.unscale(wn);
        identity(d) - (&w * w.adjoint()).scale(2.0)
    };
    // h maps e0 to -col/alpha or col/alpha depending on sign; fix column 0
    // by a diagonal phase so the first column is exactly col.
    let got = h.column(0).into_owned();
    let phase = {
        // overlap <col|got| has unit modulus when h is a reflection onto span
        let ov: C64 = col.dotc(&got);
        if ov.norm() < 0.5 {
            return Err(Error::Numerical(
                "Householder construction failed to align first column".into(),
            ));
        }
        ov / ov.norm()
    };
    let mut out = h;
    out *= phase.conj();
    // Renormalise column 0 exactly to col to kill last-bit drift.
    for r in 0..d {
        out[(r, 0)] = col[r];
    }
    Ok(out)
}
