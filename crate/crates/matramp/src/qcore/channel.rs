//! Kraus-form quantum channels.

use super::matrix::{frobenius_norm, identity, CMat, CVec};
use super::state::DensityMatrix;
use super::{qubits_for_dim, TOL_NORM};
use crate::{Error, Result};

/// Completely positive trace-preserving map given by Kraus operators.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    qubits: usize,
    ops: Vec<CMat>,
}

impl KrausChannel {
    /// Validates shape agreement and completeness sum_k K^dag K = I.
    pub fn new(ops: Vec<CMat>) -> Result<Self> {
        let first = ops
            .first()
            .ok_or_else(|| Error::arg("channel needs at least one Kraus operator"))?;
        let d = first.nrows();
        let qubits = qubits_for_dim(d)?;
        if ops.iter().any(|k| k.nrows() != d || k.ncols() != d) {
            return Err(Error::dim("Kraus operators must share a square shape"));
        }
        let mut sum = CMat::zeros(d, d);
        for k in &ops {
            sum += k.adjoint() * k;
        }
        let resid = frobenius_norm(&(&sum - identity(d)));
        if resid > TOL_NORM * (d as f64).sqrt() {
            return Err(Error::arg(format!(
                "Kraus completeness residual {resid:.3e}"
            )));
        }
        Ok(Self { qubits, ops })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        1usize << self.qubits
    }

    pub fn operators(&self) -> &[CMat] {
        &self.ops
    }
}

/// rho -> sum_k K rho K^dag.
pub fn apply_channel(ch: &KrausChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.dim() != ch.dim() {
        return Err(Error::dim(format!(
            "channel on {} qubits applied to {}-qubit state",
            ch.qubits(),
            rho.qubits()
        )));
    }
    let mut out = CMat::zeros(ch.dim(), ch.dim());
    for k in &ch.ops {
        out += k * rho.matrix() * k.adjoint();
    }
    Ok(DensityMatrix::from_trusted(ch.qubits, out))
}

/// Choi matrix sum_k vec(K) vec(K)^dag with row-major vec, normalised so
/// Tr = d (the unnormalised Choi operator of a trace-preserving map).
pub fn choi_matrix(ch: &KrausChannel) -> CMat {
    let d = ch.dim();
    let mut out = CMat::zeros(d * d, d * d);
    for k in &ch.ops {
        let mut v = CVec::zeros(d * d);
        for i in 0..d {
            for j in 0..d {
                v[i * d + j] = k[(i, j)];
            }
        }
        out += &v * v.adjoint();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::matrix::{pauli, C64};
    use crate::qcore::random::{random_density_matrix, random_kraus_channel, substream};
    use crate::qcore::state::PureState;

    fn depolarising(p: f64) -> KrausChannel {
        let s = |c: char, w: f64| pauli(c).unwrap().scale(w.sqrt());
        KrausChannel::new(vec![
            s('I', 1.0 - p),
            s('X', p / 3.0),
            s('Y', p / 3.0),
            s('Z', p / 3.0),
        ])
        .unwrap()
    }

    #[test]
    fn completeness_is_enforced() {
        let x = pauli('X').unwrap().scale(0.5f64.sqrt());
        assert!(KrausChannel::new(vec![x]).is_err());
        assert!(KrausChannel::new(vec![]).is_err());
    }

    #[test]
    fn depolarising_contracts_bloch_vector() {
        let plus = PureState::normalized(CVec::from_row_slice(&[
            C64::new(1.0, 0.0),
            C64::new(1.0, 0.0),
        ]))
        .unwrap();
        let rho = plus.density();
        let p = 0.3;
        let out = apply_channel(&depolarising(p), &rho).unwrap();
        // <X> shrinks by exactly (1 - 4p/3).
        let x = pauli('X').unwrap();
        let before = (x.clone() * rho.matrix()).trace().re;
        let after = (x * out.matrix()).trace().re;
        assert!((before - 1.0).abs() < 1e-12);
        assert!((after - (1.0 - 4.0 * p / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn choi_contraction_reproduces_channel() {
        // Oracle: out[i,j] = sum_{k,l} Choi[(i,k),(j,l)] rho[k,l] for the
        // row-major vec convention.
        let mut rng = substream(13, &[0]);
        let ch = random_kraus_channel(1, 2, &mut rng).unwrap();
        let rho = random_density_matrix(1, &mut rng).unwrap();
        let want = apply_channel(&ch, &rho).unwrap();
        let choi = choi_matrix(&ch);
        let d = 2usize;
        let mut got = CMat::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..d {
                    for l in 0..d {
                        acc += choi[(i * d + k, j * d + l)] * rho.matrix()[(k, l)];
                    }
                }
                got[(i, j)] = acc;
            }
        }
        assert!(frobenius_norm(&(got - want.matrix())) < 1e-10);
    }

    #[test]
    fn choi_trace_equals_dimension() {
        let mut rng = substream(13, &[1]);
        let ch = random_kraus_channel(2, 4, &mut rng).unwrap();
        let tr = choi_matrix(&ch).trace();
        assert!((tr.re - 4.0).abs() < 1e-10 && tr.im.abs() < 1e-12);
    }
}
