//! Two-copy moment of the maximally-entangled family.
//!
//! Averaging (|B><B|)^(x2) over |B> = (U (x) I)|Phi> with Haar U gives
//! a four-term combination of copy swaps,
//!     E = a (I + S13 S24) + b (S13 + S24),
//!     a = 2^(-2n) / (2^(2n) - 1),   b = -2^(-3n) / (2^(2n) - 1),
//! where S13 swaps the row registers of the two copies and S24 the
//! column registers. Against the full symmetric-subspace average
//! (I + S13 S24) / (2^(2n) (2^(2n) + 1)) the difference is diagonal on
//! the joint swap eigensectors, so the trace distance has a closed
//! form; the Monte-Carlo estimate over sampled Haar unitaries checks it
//! with a split-half noise calibration.

use crate::qcore::{
    check_qubit_budget, frobenius_norm, haar_random_unitary, substream, trace_norm, CMat, C64,
};
use crate::{Error, Result};
use serde::Serialize;

/// Outcome of the design comparison at one size.
#[derive(Debug, Clone, Serialize)]
pub struct TwoDesignReport {
    pub n: usize,
    pub exact_distance: f64,
    pub bound: f64,
    pub mc_samples: u64,
    /// Monte-Carlo trace distance to the symmetric average.
    pub mc_distance: Option<f64>,
    /// Frobenius gap between the sampled and closed-form averages.
    pub mc_frobenius_gap: Option<f64>,
    /// Split-half estimate of the sampling noise on that gap.
    pub mc_noise_scale: Option<f64>,
    /// Gap within three sigma of the split-half noise.
    pub mc_consistent: Option<bool>,
}

/// Exact trace distance between the family average and the symmetric
/// 2-design average, from the swap-sector eigenvalues: only the (+,+)
/// and (-,-) sectors survive, with eigenvalues 2c0 + 2b and 2c0 - 2b.
pub fn two_design_exact_distance(n: usize) -> f64 {
    let d = (1u64 << n) as f64;
    let d2 = d * d;
    let c0 = 2.0 / (d2 * d2 * d2 - d2);
    let b = -1.0 / (d * d2 * (d2 - 1.0));
    let dim_pp = (d * (d + 1.0) / 2.0).powi(2);
    let dim_mm = (d * (d - 1.0) / 2.0).powi(2);
    0.5 * ((2.0 * c0 + 2.0 * b).abs() * dim_pp + (2.0 * c0 - 2.0 * b).abs() * dim_mm)
}

/// Bound chain on that distance.
pub fn two_design_bound(n: usize) -> f64 {
    let d2 = (1u64 << (2 * n)) as f64;
    let d4 = d2 * d2;
    let d6 = d4 * d2;
    2.0 * d2 / (d4 - 1.0) + 2.0 * d2 / (d6 - d2) + 2.0 / (d2 - 1.0)
}

/// Permutation operator on four registers of dimension 2^n each; `map`
/// sends input digit positions to output positions.
fn register_permutation(n: usize, map: [usize; 4]) -> CMat {
    let d = 1usize << n;
    let dim = d * d * d * d;
    let mut out = CMat::zeros(dim, dim);
    for col in 0..dim {
        let digits = [
            col / (d * d * d) % d,
            col / (d * d) % d,
            col / d % d,
            col % d,
        ];
        let mut row = 0usize;
        for &src in &map {
            row = row * d + digits[src];
        }
        out[(row, col)] = C64::new(1.0, 0.0);
    }
    out
}

/// Closed-form family average, dense.
pub fn averaged_two_copy_dense(n: usize) -> Result<CMat> {
    check_qubit_budget(4 * n)?;
    let d = (1u64 << n) as f64;
    let d2 = d * d;
    let a = 1.0 / (d2 * (d2 - 1.0));
    let b = -1.0 / (d * d2 * (d2 - 1.0));
    let s13 = register_permutation(n, [2, 1, 0, 3]);
    let s24 = register_permutation(n, [0, 3, 2, 1]);
    let sboth = register_permutation(n, [2, 3, 0, 1]);
    let dim = s13.nrows();
    Ok((CMat::identity(dim, dim) + sboth).scale(a) + (s13 + s24).scale(b))
}

/// Symmetric-subspace average over all unit states of dimension 4^n,
/// dense.
pub fn design_target_dense(n: usize) -> Result<CMat> {
    check_qubit_budget(4 * n)?;
    let d2 = (1u64 << (2 * n)) as f64;
    let sboth = register_permutation(n, [2, 3, 0, 1]);
    let dim = sboth.nrows();
    Ok((CMat::identity(dim, dim) + sboth).scale(1.0 / (d2 * (d2 + 1.0))))
}

/// Compares the closed form against the symmetric average and, when
/// `mc_samples > 0`, against a sampled Haar average.
pub fn two_design_check(n: usize, mc_samples: u64, seed: u64) -> Result<TwoDesignReport> {
    if !(1..=3).contains(&n) {
        return Err(Error::ResourceLimit(format!(
            "two-copy operator overflows past n = 3, got {n}"
        )));
    }
    check_qubit_budget(4 * n)?;
    let exact = two_design_exact_distance(n);
    let bound = two_design_bound(n);
    if mc_samples == 0 {
        return Ok(TwoDesignReport {
            n,
            exact_distance: exact,
            bound,
            mc_samples: 0,
            mc_distance: None,
            mc_frobenius_gap: None,
            mc_noise_scale: None,
            mc_consistent: None,
        });
    }
    if mc_samples < 10 {
        return Err(Error::arg("at least 10 samples for a split-half check"));
    }
    let d = 1usize << n;
    let l = d * d;
    let dim = l * l;
    let mut rng = substream(seed, &[0x77, n as u64]);
    let mut halves = [CMat::zeros(dim, dim), CMat::zeros(dim, dim)];
    let counts = [mc_samples / 2, mc_samples - mc_samples / 2];
    for (half, &count) in halves.iter_mut().zip(counts.iter()) {
        for _ in 0..count {
            let u = haar_random_unitary(n, &mut rng)?;
            let scale = 1.0 / (d as f64).sqrt();
            let mut b = crate::qcore::CVec::zeros(l);
            for i in 0..d {
                for j in 0..d {
                    b[i * d + j] = u[(i, j)] * scale;
                }
            }
            let mut two = crate::qcore::CVec::zeros(dim);
            for i in 0..l {
                for j in 0..l {
                    two[i * l + j] = b[i] * b[j];
                }
            }
            *half += &two * two.adjoint();
        }
    }
    let m1 = halves[0].scale(1.0 / counts[0] as f64);
    let m2 = halves[1].scale(1.0 / counts[1] as f64);
    let mean = (&m1 + &m2).scale(0.5);
    let noise = 0.5 * frobenius_norm(&(&m1 - &m2));
    let gap = frobenius_norm(&(&mean - &averaged_two_copy_dense(n)?));
    let dist = 0.5 * trace_norm(&(&mean - &design_target_dense(n)?))?;
    Ok(TwoDesignReport {
        n,
        exact_distance: exact,
        bound,
        mc_samples,
        mc_distance: Some(dist),
        mc_frobenius_gap: Some(gap),
        mc_noise_scale: Some(noise),
        mc_consistent: Some(gap <= 3.0 * noise),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sector_formula_matches_the_dense_route() {
        for n in 1..=2usize {
            let e = averaged_two_copy_dense(n).unwrap();
            let t = design_target_dense(n).unwrap();
            let dense = 0.5 * trace_norm(&(e - t)).unwrap();
            let formula = two_design_exact_distance(n);
            assert!(
                (dense - formula).abs() < 1e-12,
                "n={n}: dense {dense} vs formula {formula}"
            );
        }
    }

    #[test]
    fn closed_form_average_has_unit_trace_and_symmetry() {
        let e = averaged_two_copy_dense(1).unwrap();
        assert!((e.trace().re - 1.0).abs() < 1e-12);
        assert!(frobenius_norm(&(&e - &e.adjoint())) < 1e-12);
    }

    #[test]
    fn distances_sit_under_the_bound_and_decrease() {
        let mut last = f64::INFINITY;
        for n in 1..=3usize {
            let r = two_design_check(n, 0, 0).unwrap();
            assert!(
                r.exact_distance <= r.bound,
                "n={n}: {} over bound {}",
                r.exact_distance,
                r.bound
            );
            assert!(r.exact_distance < last);
            last = r.exact_distance;
        }
        // Known values of the exact distance.
        assert!((two_design_exact_distance(1) - 0.15).abs() < 1e-12);
        assert!((two_design_exact_distance(2) - 0.11029411764705882).abs() < 1e-12);
    }

    #[test]
    fn shrink_rate_is_about_half_per_size_step() {
        // The per-step decay settles toward 2x, nowhere near a
        // sixteenth; pin the measured ratios so regressions surface.
        let r12 = two_design_exact_distance(1) / two_design_exact_distance(2);
        let r23 = two_design_exact_distance(2) / two_design_exact_distance(3);
        assert!((r12 - 1.36).abs() < 0.01, "ratio {r12}");
        assert!((r23 - 1.82).abs() < 0.01, "ratio {r23}");
    }

    #[test]
    fn monte_carlo_agrees_within_calibrated_noise() {
        let r = two_design_check(1, 2000, 11).unwrap();
        assert_eq!(r.mc_consistent, Some(true));
        let mc = r.mc_distance.unwrap();
        assert!(
            (mc - r.exact_distance).abs() < 0.05,
            "mc {mc} vs exact {}",
            r.exact_distance
        );
    }

    #[test]
    fn size_guard_rejects_heavy_registers() {
        assert!(two_design_check(4, 0, 0).is_err());
        assert!(two_design_check(1, 5, 0).is_err());
    }
}
