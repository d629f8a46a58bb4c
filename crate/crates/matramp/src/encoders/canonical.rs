//! Canonical (KAK) form of two-qubit unitaries.
//!
//! Every U in U(4) factors as
//! `U = phase * (post_hi (x) post_lo) * A(theta) * (pre_hi (x) pre_lo)`
//! with `A(theta) = exp(i(tx XX + ty YY + tz ZZ))` and angles in the
//! chamber `pi/4 >= tx >= ty >= |tz|`, `tx, ty >= 0`. The route is the
//! magic-basis one: conjugating by the magic basis turns local unitaries
//! into real orthogonal matrices and `A(theta)` into a diagonal of
//! phases, so the interaction content of `U` sits in the eigenvalues of
//! the complex symmetric matrix `M = Up^T Up`.

use crate::qcore::{
    frobenius_norm, identity, is_unitary, pauli, tensor, CMat, C64, TOL_NORM,
};
use crate::{Error, Result};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

/// Sign of Pauli-pair `c` on magic-basis vector `k`: `(P_c (x) P_c)` is
/// diagonal in the magic basis with these +-1 entries. Columns follow
/// (XX, YY, ZZ).
const SIGNS: [[f64; 3]; 4] = [
    [1.0, -1.0, 1.0],
    [-1.0, 1.0, 1.0],
    [-1.0, -1.0, -1.0],
    [1.0, 1.0, -1.0],
];

/// The magic basis as a matrix of column vectors.
fn magic_basis() -> CMat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let c = |re: f64, im: f64| C64::new(re * s, im * s);
    let z = C64::new(0.0, 0.0);
    CMat::from_row_slice(
        4,
        4,
        &[
            c(1.0, 0.0), c(0.0, -1.0), z, z,
            z, z, c(1.0, 0.0), c(0.0, -1.0),
            z, z, c(-1.0, 0.0), c(0.0, -1.0),
            c(1.0, 0.0), c(0.0, 1.0), z, z,
        ],
    )
}

/// exp(i(tx XX + ty YY + tz ZZ)) in closed form. The four Pauli-pair
/// coefficients come from `canonical_coefficients`.
pub fn canonical_gate(theta: [f64; 3]) -> CMat {
    let g = canonical_coefficients(theta);
    let mut out = CMat::zeros(4, 4);
    for (gc, p) in g.iter().zip(['I', 'X', 'Y', 'Z']) {
        let pp = tensor(&pauli(p).unwrap(), &pauli(p).unwrap()).unwrap();
        out += pp.map(|z| z * gc);
    }
    out
}

/// Pauli-pair expansion of the canonical gate:
/// `A(theta) = g0 II + g1 XX + g2 YY + g3 ZZ`.
pub fn canonical_coefficients(theta: [f64; 3]) -> [C64; 4] {
    let (cx, sx) = (theta[0].cos(), theta[0].sin());
    let (cy, sy) = (theta[1].cos(), theta[1].sin());
    let (cz, sz) = (theta[2].cos(), theta[2].sin());
    [
        C64::new(cx * cy * cz, sx * sy * sz),
        C64::new(cx * sy * sz, sx * cy * cz),
        C64::new(sx * cy * sz, cx * sy * cz),
        C64::new(sx * sy * cz, cx * cy * sz),
    ]
}

/// Interaction weight of the canonical gate: one over the sum of the
/// absolute Pauli-pair coefficients. This is the largest block-encoding
/// scale a channel built from the gate's interaction terms can carry.
pub fn interaction_eta(theta: [f64; 3]) -> f64 {
    let s: f64 = canonical_coefficients(theta).iter().map(|g| g.norm()).sum();
    1.0 / s
}

/// Full canonical decomposition data.
#[derive(Debug, Clone)]
pub struct KakDecomposition {
    /// Unit-modulus global phase.
    pub phase: C64,
    /// Local factors applied after the canonical gate (upper, lower).
    pub post: (CMat, CMat),
    /// Canonical angles (tx, ty, tz).
    pub theta: [f64; 3],
    /// Local factors applied before the canonical gate (upper, lower).
    pub pre: (CMat, CMat),
}

impl KakDecomposition {
    /// phase * (post_hi (x) post_lo) * A(theta) * (pre_hi (x) pre_lo).
    pub fn reconstruct(&self) -> CMat {
        let l1 = tensor(&self.post.0, &self.post.1).unwrap();
        let l2 = tensor(&self.pre.0, &self.pre.1).unwrap();
        (l1 * canonical_gate(self.theta) * l2).map(|z| z * self.phase)
    }
}

/// Working form during canonicalisation: locals as dense 4x4 products.
struct RawKak {
    phase: C64,
    l1: CMat,
    theta: [f64; 3],
    l2: CMat,
}

fn pauli_pair(c: char) -> CMat {
    let p = pauli(c).unwrap();
    tensor(&p, &p).unwrap()
}

impl RawKak {
    /// Shift theta[axis] by -k*pi/2, compensating with i^k (P (x) P)^k on
    /// the pre side: A(t) = A(t - k pi/2) * (i P(x)P)^k.
    fn shift(&mut self, axis: usize, k: i64) {
        if k == 0 {
            return;
        }
        self.theta[axis] -= k as f64 * FRAC_PI_2;
        let axis_char = ['X', 'Y', 'Z'][axis];
        let kr = k.rem_euclid(4) as u32;
        let mut factor = identity(4);
        let ip = pauli_pair(axis_char).map(|z| z * C64::new(0.0, 1.0));
        for _ in 0..kr {
            factor = &ip * factor;
        }
        self.l2 = factor * &self.l2;
    }

    /// Conjugates the canonical gate by a local m (x) m, permuting or
    /// sign-flipping angles: A(theta') = (m (x) m) A(theta) (m (x) m)^dag.
    fn conjugate(&mut self, m: &CMat, new_theta: [f64; 3]) {
        let mm = tensor(m, m).unwrap();
        self.l1 = &self.l1 * mm.adjoint();
        self.l2 = mm * &self.l2;
        self.theta = new_theta;
    }

    /// Flips the sign of two angles via a one-sided local p (x) I with
    /// p^2 = I: A(theta') = (p (x) I) A(theta) (p (x) I).
    fn pair_flip(&mut self, keep_axis: usize) {
        let p = pauli(['X', 'Y', 'Z'][keep_axis]).unwrap();
        let pi = tensor(&p, &identity(2)).unwrap();
        self.l1 = &self.l1 * &pi;
        self.l2 = pi * &self.l2;
        for a in 0..3 {
            if a != keep_axis {
                self.theta[a] = -self.theta[a];
            }
        }
    }

    fn swap_axes(&mut self, a: usize, b: usize) {
        debug_assert!(a != b);
        let mut t = self.theta;
        t.swap(a, b);
        // S (x) S swaps XX and YY; H (x) H swaps XX and ZZ; their
        // composition handles YY and ZZ.
        match (a.min(b), a.max(b)) {
            (0, 1) => {
                let s = CMat::from_row_slice(
                    2,
                    2,
                    &[
                        C64::new(1.0, 0.0),
                        C64::new(0.0, 0.0),
                        C64::new(0.0, 0.0),
                        C64::new(0.0, 1.0),
                    ],
                );
                self.conjugate(&s, t);
            }
            (0, 2) => {
                let h = std::f64::consts::FRAC_1_SQRT_2;
                let hm = CMat::from_row_slice(
                    2,
                    2,
                    &[
                        C64::new(h, 0.0),
                        C64::new(h, 0.0),
                        C64::new(h, 0.0),
                        C64::new(-h, 0.0),
                    ],
                );
                self.conjugate(&hm, t);
            }
            _ => {
                self.swap_axes(0, 1);
                self.swap_axes(0, 2);
                self.swap_axes(0, 1);
            }
        }
    }
}

/// Joint diagonalisation of the commuting real symmetric parts of a
/// unitary complex symmetric matrix; returns an orthogonal P with
/// determinant +1 such that P^T M P is diagonal.
fn joint_diagonalize(m: &CMat) -> Result<nalgebra::DMatrix<f64>> {
    let d = m.nrows();
    let a = nalgebra::DMatrix::<f64>::from_fn(d, d, |i, j| m[(i, j)].re);
    let b = nalgebra::DMatrix::<f64>::from_fn(d, d, |i, j| m[(i, j)].im);
    // Random-ish fixed mixing angles; one of them separates the joint
    // eigenspaces unless A and B share a degeneracy on every combo, which
    // cannot happen for commuting symmetric matrices.
    let seeds: [f64; 7] = [0.0, 0.791234, 0.31415, 1.23456, 2.02002, 0.577215, 1.61803];
    for &w in &seeds {
        let combo = a.clone().scale(w.cos()) + b.clone().scale(w.sin());
        let sym = nalgebra::SymmetricEigen::new(combo);
        let mut p = sym.eigenvectors;
        // Residual of P^T M P off the diagonal decides acceptance.
        let pc = p.map(|x| C64::new(x, 0.0));
        let dmat = pc.transpose() * m * &pc;
        let mut off = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    off += dmat[(i, j)].norm_sqr();
                }
            }
        }
        if off.sqrt() < 1e-11 {
            if p.determinant() < 0.0 {
                for i in 0..d {
                    p[(i, 0)] = -p[(i, 0)];
                }
            }
            return Ok(p);
        }
    }
    Err(Error::Numerical(
        "joint diagonalisation did not converge".into(),
    ))
}

/// Canonical decomposition of a two-qubit unitary.
pub fn kak_decompose(u: &CMat) -> Result<KakDecomposition> {
    if u.nrows() != 4 || u.ncols() != 4 {
        return Err(Error::dim("kak_decompose needs a 4x4 matrix"));
    }
    if !is_unitary(u, TOL_NORM) {
        return Err(Error::NotUnitary("kak_decompose input".into()));
    }
    let det = u.determinant();
    let alpha = C64::from_polar(1.0, det.arg() / 4.0);
    let g = u.map(|z| z / alpha);
    let mb = magic_basis();
    let up = mb.adjoint() * &g * &mb;
    let m2 = up.transpose() * &up;

    let p = joint_diagonalize(&m2)?;
    let pc = p.map(|x| C64::new(x, 0.0));
    let d2 = pc.transpose() * &m2 * &pc;
    // Eigenphases halved; the branch sum must be a multiple of pi because
    // det(Up) = 1, and one entry absorbs the mismatch.
    let mut phi = [0.0f64; 4];
    for k in 0..4 {
        phi[k] = d2[(k, k)].arg() / 2.0;
    }
    let total: f64 = phi.iter().sum();
    let wraps = (total / std::f64::consts::PI).round();
    phi[0] -= wraps * std::f64::consts::PI;

    let dinv = CMat::from_fn(4, 4, |i, j| {
        if i == j {
            C64::from_polar(1.0, -phi[i])
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let o1c = &up * &pc * dinv;
    // O1 is real orthogonal in exact arithmetic; reject anything else.
    let max_im = o1c.iter().map(|z| z.im.abs()).fold(0.0f64, f64::max);
    if max_im > 1e-8 {
        return Err(Error::Numerical(format!(
            "left orthogonal factor has imaginary residue {max_im:.3e}"
        )));
    }
    let theta = [
        0.25 * (0..4).map(|k| SIGNS[k][0] * phi[k]).sum::<f64>(),
        0.25 * (0..4).map(|k| SIGNS[k][1] * phi[k]).sum::<f64>(),
        0.25 * (0..4).map(|k| SIGNS[k][2] * phi[k]).sum::<f64>(),
    ];
    let l1 = &mb * o1c * mb.adjoint();
    let l2 = &mb * pc.transpose() * mb.adjoint();

    let mut raw = RawKak {
        phase: alpha,
        l1,
        theta,
        l2,
    };
    canonicalize(&mut raw);

    let (post_hi, post_lo) = split_local(&raw.l1)?;
    let (pre_hi, pre_lo) = split_local(&raw.l2)?;
    let out = KakDecomposition {
        phase: raw.phase,
        post: (post_hi, post_lo),
        theta: raw.theta,
        pre: (pre_hi, pre_lo),
    };
    let resid = frobenius_norm(&(out.reconstruct() - u));
    if resid > 1e-8 {
        return Err(Error::Numerical(format!(
            "canonical reconstruction residual {resid:.3e}"
        )));
    }
    Ok(out)
}

/// Brings angles into the chamber pi/4 >= tx >= ty >= |tz|, tx, ty >= 0,
/// absorbing every move into the local factors and the global phase.
fn canonicalize(raw: &mut RawKak) {
    for _pass in 0..6 {
        // Reduce each angle into (-pi/4, pi/4]; shift() folds the whole
        // compensating factor, phase included, into the pre-local.
        for axis in 0..3 {
            let mut k = (raw.theta[axis] / FRAC_PI_2).round() as i64;
            if raw.theta[axis] - k as f64 * FRAC_PI_2 <= -FRAC_PI_4 + 1e-14 {
                k -= 1;
            }
            raw.shift(axis, k);
        }
        // Sort by absolute value, descending.
        for a in 0..2 {
            for b in (a + 1)..3 {
                if raw.theta[b].abs() > raw.theta[a].abs() + 1e-15 {
                    raw.swap_axes(a, b);
                }
            }
        }
        // Push signs onto the last angle; pair flips preserve magnitudes.
        if raw.theta[0] < 0.0 && raw.theta[1] < 0.0 {
            raw.pair_flip(2);
        }
        if raw.theta[0] < 0.0 && raw.theta[2] < 0.0 {
            raw.pair_flip(1);
        }
        if raw.theta[1] < 0.0 && raw.theta[2] < 0.0 {
            raw.pair_flip(0);
        }
        if raw.theta[0] < 0.0 {
            raw.pair_flip(1); // flips (x, z)
        }
        if raw.theta[1] < 0.0 {
            raw.pair_flip(0); // flips (y, z)
        }
        let done = raw.theta[0] >= raw.theta[1] - 1e-15
            && raw.theta[1] >= raw.theta[2].abs() - 1e-15
            && raw.theta[1] >= 0.0
            && raw.theta[0] <= FRAC_PI_4 + 1e-15
            && raw.theta[2] > -FRAC_PI_4 - 1e-15;
        if done {
            break;
        }
    }
}

/// Splits an exact tensor product L = u (x) v into its 2x2 factors.
fn split_local(l: &CMat) -> Result<(CMat, CMat)> {
    let block = |i: usize, j: usize| -> CMat {
        CMat::from_fn(2, 2, |r, c| l[(2 * i + r, 2 * j + c)])
    };
    // The largest block is a nonzero multiple of v.
    let mut best = (0usize, 0usize);
    let mut best_norm = -1.0f64;
    for i in 0..2 {
        for j in 0..2 {
            let n = frobenius_norm(&block(i, j));
            if n > best_norm {
                best_norm = n;
                best = (i, j);
            }
        }
    }
    if best_norm < 1e-8 {
        return Err(Error::Numerical("local factor is numerically zero".into()));
    }
    let v = block(best.0, best.1).map(|z| z * C64::new(std::f64::consts::SQRT_2 / best_norm, 0.0));
    let mut u = CMat::zeros(2, 2);
    for i in 0..2 {
        for j in 0..2 {
            u[(i, j)] = (v.adjoint() * block(i, j)).trace() / C64::new(2.0, 0.0);
        }
    }
    let resid = frobenius_norm(&(tensor(&u, &v)? - l));
    if resid > 1e-8 {
        return Err(Error::Numerical(format!(
            "matrix is not a local product, residual {resid:.3e}"
        )));
    }
    Ok((u, v))
}

/// Canonical angles of a two-qubit unitary.
pub fn canonical_angles(u: &CMat) -> Result<[f64; 3]> {
    Ok(kak_decompose(u)?.theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoders::circuit::Gate;
    use crate::qcore::{haar_random_unitary, substream};

    #[test]
    fn magic_basis_is_unitary_and_localises() {
        let mb = magic_basis();
        assert!(is_unitary(&mb, 1e-14));
        let mut rng = substream(29, &[0]);
        for _ in 0..10 {
            let a = haar_random_unitary(1, &mut rng).unwrap();
            let b = haar_random_unitary(1, &mut rng).unwrap();
            // Strip the U(2) phases so the product is in SU(2) x SU(2).
            let fix = |m: &CMat| {
                let det = m.determinant();
                m.map(|z| z / C64::from_polar(1.0, det.arg() / 2.0))
            };
            let local = tensor(&fix(&a), &fix(&b)).unwrap();
            let o = mb.adjoint() * local * &mb;
            let max_im = o.iter().map(|z| z.im.abs()).fold(0.0f64, f64::max);
            assert!(max_im < 1e-12, "imag residue {max_im}");
            let or = o.map(|z| C64::new(z.re, 0.0));
            assert!(is_unitary(&or, 1e-10));
        }
    }

    #[test]
    fn sign_table_matches_pauli_pairs() {
        // (P (x) P) must be diagonal in the magic basis with the tabled
        // signs.
        let mb = magic_basis();
        for (c, col) in [('X', 0usize), ('Y', 1), ('Z', 2)] {
            let d = mb.adjoint() * pauli_pair(c) * &mb;
            for k in 0..4 {
                assert!((d[(k, k)] - C64::new(SIGNS[k][col], 0.0)).norm() < 1e-13);
                for j in 0..4 {
                    if j != k {
                        assert!(d[(k, j)].norm() < 1e-13);
                    }
                }
            }
        }
    }

    #[test]
    fn canonical_gate_matches_magic_diagonal() {
        let mb = magic_basis();
        let theta = [0.31, 0.17, -0.08];
        let direct = canonical_gate(theta);
        let mut d = CMat::zeros(4, 4);
        for k in 0..4 {
            let phi: f64 = (0..3).map(|c| SIGNS[k][c] * theta[c]).sum();
            d[(k, k)] = C64::from_polar(1.0, phi);
        }
        let via_basis = &mb * d * mb.adjoint();
        assert!(frobenius_norm(&(direct - via_basis)) < 1e-12);
    }

    #[test]
    fn known_gate_angles() {
        let close = |a: [f64; 3], b: [f64; 3]| {
            a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-9)
        };
        let cnot = Gate::two("cnot", 0, 1).unitary().unwrap();
        assert!(close(canonical_angles(&cnot).unwrap(), [FRAC_PI_4, 0.0, 0.0]));
        let cz = Gate::two("cz", 0, 1).unitary().unwrap();
        assert!(close(canonical_angles(&cz).unwrap(), [FRAC_PI_4, 0.0, 0.0]));
        let swap = Gate::two("swap", 0, 1).unitary().unwrap();
        assert!(close(
            canonical_angles(&swap).unwrap(),
            [FRAC_PI_4, FRAC_PI_4, FRAC_PI_4]
        ));
        // Locals carry no interaction.
        let mut rng = substream(29, &[1]);
        let a = haar_random_unitary(1, &mut rng).unwrap();
        let b = haar_random_unitary(1, &mut rng).unwrap();
        let local = tensor(&a, &b).unwrap();
        assert!(close(canonical_angles(&local).unwrap(), [0.0, 0.0, 0.0]));
    }

    #[test]
    fn decomposition_reconstructs_haar_unitaries() {
        let mut rng = substream(29, &[2]);
        for trial in 0..25 {
            let u = haar_random_unitary(2, &mut rng).unwrap();
            let kak = kak_decompose(&u).unwrap();
            let resid = frobenius_norm(&(kak.reconstruct() - &u));
            assert!(resid < 1e-9, "trial {trial}: residual {resid}");
            let [tx, ty, tz] = kak.theta;
            assert!(tx <= FRAC_PI_4 + 1e-12 && tx >= ty - 1e-12, "trial {trial}");
            assert!(ty >= tz.abs() - 1e-12 && ty >= -1e-12, "trial {trial}");
            for m in [&kak.post.0, &kak.post.1, &kak.pre.0, &kak.pre.1] {
                assert!(is_unitary(m, 1e-9));
            }
            assert!((kak.phase.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn angles_are_local_invariants() {
        let mut rng = substream(29, &[3]);
        for _ in 0..10 {
            let u = haar_random_unitary(2, &mut rng).unwrap();
            let base = canonical_angles(&u).unwrap();
            let l = tensor(
                &haar_random_unitary(1, &mut rng).unwrap(),
                &haar_random_unitary(1, &mut rng).unwrap(),
            )
            .unwrap();
            let r = tensor(
                &haar_random_unitary(1, &mut rng).unwrap(),
                &haar_random_unitary(1, &mut rng).unwrap(),
            )
            .unwrap();
            let dressed = canonical_angles(&(l * &u * r)).unwrap();
            for c in 0..3 {
                assert!((base[c] - dressed[c]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn canonical_gate_special_values() {
        // The structured gates carry known interaction weights.
        let eta_cnot = interaction_eta([FRAC_PI_4, 0.0, 0.0]);
        assert!((eta_cnot - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        let eta_swap = interaction_eta([FRAC_PI_4, FRAC_PI_4, FRAC_PI_4]);
        assert!((eta_swap - 0.5).abs() < 1e-12);
        let eta_id = interaction_eta([0.0, 0.0, 0.0]);
        assert!((eta_id - 1.0).abs() < 1e-12);
        // Coefficient moduli square-sum to one for any angles.
        let g = canonical_coefficients([0.4, 0.2, 0.1]);
        let s2: f64 = g.iter().map(|z| z.norm_sqr()).sum();
        assert!((s2 - 1.0).abs() < 1e-12);
        // SWAP: all four coefficients equal 2^{-3/2} (1 + i).
        let gs = canonical_coefficients([FRAC_PI_4, FRAC_PI_4, FRAC_PI_4]);
        let want = C64::new(0.5f64.powf(1.5), 0.5f64.powf(1.5));
        for z in gs {
            assert!((z - want).norm() < 1e-12);
        }
    }

    #[test]
    fn split_local_rejects_entangling() {
        let cnot = Gate::two("cnot", 0, 1).unitary().unwrap();
        assert!(split_local(&cnot).is_err());
    }

    #[test]
    fn rejects_non_unitary_input() {
        assert!(kak_decompose(&identity(4).scale(2.0)).is_err());
        assert!(kak_decompose(&identity(2)).is_err());
    }
}
