//! Closed-form sweep of the weight product across encoding regimes.
//!
//! For a circuit-prepared state with K cut-crossing two-qubit gates the
//! channel weight is 2^(-1 - K/2); for a product-formula evolution it
//! is the accumulated slice efficiency. Combined with the unitary-side
//! weight 2^(n/2) / ||c||_1 this gives
//!     gamma lambda = 2^(n/2) 2^(-1 - K/2) / ||c||_1   (circuit)
//!     gamma lambda = 2^(n/2) eta / (2 ||c||_1)        (product formula)
//! and the sweep tabulates both on a parameter grid without sampling.

use crate::qcore::check_qubit_budget;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// One product-formula grid point: accumulated interaction angle
/// `xt = |H|_inter * t` split into `r` slices.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TrotterPoint {
    pub xt: f64,
    pub r: usize,
}

/// Sweep axes: crossing-gate counts, product-formula points, and
/// coefficient one-norms for the unitary side.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegimeGrid {
    pub n: usize,
    pub circuit_cuts: Vec<usize>,
    pub trotter_points: Vec<TrotterPoint>,
    pub b_one_norms: Vec<f64>,
}

/// One table row of the regime sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub n: usize,
    /// "circuit" or "trotter".
    pub kind: &'static str,
    /// K for circuits, xt for product formulas.
    pub parameter: f64,
    /// Slice count; zero for circuits.
    pub subdivisions: u64,
    /// Channel weight of the preparation.
    pub eta: f64,
    pub b_one_norm: f64,
    pub gamma_lambda: f64,
    /// Query-count gain over the direct route per the two laws.
    pub sampling_gain: f64,
    pub estimation_gain: f64,
}

/// Slice efficiency of r first-order slices at total angle xt.
pub fn trotter_eta(xt: f64, r: usize) -> Result<f64> {
    if r == 0 {
        return Err(Error::arg("subdivision count must be positive"));
    }
    let theta = xt / r as f64;
    if !(0.0..std::f64::consts::FRAC_PI_2).contains(&theta) {
        return Err(Error::arg(format!(
            "slice angle {theta:.4} outside [0, pi/2); raise the subdivision count"
        )));
    }
    Ok((theta.cos() + theta.sin()).powi(-(r as i32)))
}

/// Evaluates the weight product over the whole grid. Rows are emitted
/// circuit-first, grid-major, one-norm-minor; no randomness anywhere.
pub fn run_regime_sweep(grid: &RegimeGrid) -> Result<Vec<SweepRow>> {
    check_qubit_budget(grid.n)?;
    if grid.n == 0 {
        return Err(Error::arg("sweep needs at least one qubit"));
    }
    if grid.b_one_norms.is_empty() {
        return Err(Error::arg("sweep needs at least one coefficient one-norm"));
    }
    for &b1 in &grid.b_one_norms {
        // Unit coefficient 2-norm forces ||c||_1 >= 1.
        if !(b1 >= 1.0) || !b1.is_finite() {
            return Err(Error::arg(format!(
                "coefficient one-norm {b1} below the unit-state floor"
            )));
        }
    }
    let root = ((1usize << grid.n) as f64).sqrt();
    let mut rows = Vec::new();
    for &k in &grid.circuit_cuts {
        let eta = (2.0f64).powf(-(k as f64) / 2.0);
        for &b1 in &grid.b_one_norms {
            let gl = root * 0.5 * eta / b1;
            rows.push(SweepRow {
                n: grid.n,
                kind: "circuit",
                parameter: k as f64,
                subdivisions: 0,
                eta,
                b_one_norm: b1,
                gamma_lambda: gl,
                sampling_gain: gl * gl,
                estimation_gain: gl,
            });
        }
    }
    for &point in &grid.trotter_points {
        let eta = trotter_eta(point.xt, point.r)?;
        for &b1 in &grid.b_one_norms {
            let gl = root * eta / (2.0 * b1);
            rows.push(SweepRow {
                n: grid.n,
                kind: "trotter",
                parameter: point.xt,
                subdivisions: point.r as u64,
                eta,
                b_one_norm: b1,
                gamma_lambda: gl,
                sampling_gain: gl * gl,
                estimation_gain: gl,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circuit_rows_match_the_closed_form() {
        let grid = RegimeGrid {
            n: 4,
            circuit_cuts: vec![0, 4],
            trotter_points: vec![],
            b_one_norms: vec![1.0],
        };
        let rows = run_regime_sweep(&grid).unwrap();
        // K = 0 on a single-string state reaches the family maximum.
        assert!((rows[0].gamma_lambda - 2.0).abs() < 1e-12);
        // K = n pulls the product down to 1/2 at unit one-norm.
        assert!((rows[1].gamma_lambda - 0.5).abs() < 1e-12);
        assert!((rows[1].sampling_gain - 0.25).abs() < 1e-12);
    }

    #[test]
    fn trotter_eta_approaches_the_exponential_limit() {
        let eta = trotter_eta(0.5, 200).unwrap();
        assert!(
            ((eta - (-0.5f64).exp()) / (-0.5f64).exp()).abs() < 0.01,
            "eta {eta}"
        );
        // Per slice the factor cos(th) + sin(th) grows slower than
        // e^th, so refining the split sheds weight: eta falls toward
        // the exponential limit from above.
        let coarse = trotter_eta(0.5, 2).unwrap();
        assert!(coarse > eta && eta > (-0.5f64).exp());
        assert!(trotter_eta(2.0, 1).is_err());
        assert!(trotter_eta(0.5, 0).is_err());
    }

    #[test]
    fn one_norm_floor_tracks_the_ancilla_bound() {
        // With 2^k terms the one-norm tops out at 2^(k/2), so the
        // unitary-side weight stays above 2^((n-k)/2).
        let n = 4;
        let k = 2;
        let grid = RegimeGrid {
            n,
            circuit_cuts: vec![0],
            trotter_points: vec![],
            b_one_norms: vec![(2.0f64).powf(k as f64 / 2.0)],
        };
        let rows = run_regime_sweep(&grid).unwrap();
        let lambda = rows[0].gamma_lambda / 0.5;
        assert!(lambda >= (2.0f64).powf((n - k) as f64 / 2.0) - 1e-12);
    }

    #[test]
    fn grid_validation_rejects_bad_inputs() {
        let mut grid = RegimeGrid {
            n: 2,
            circuit_cuts: vec![1],
            trotter_points: vec![],
            b_one_norms: vec![0.5],
        };
        assert!(run_regime_sweep(&grid).is_err());
        grid.b_one_norms = vec![];
        assert!(run_regime_sweep(&grid).is_err());
    }

    #[test]
    fn sweep_is_deterministic() {
        let grid = RegimeGrid {
            n: 3,
            circuit_cuts: vec![0, 1, 2],
            trotter_points: vec![TrotterPoint { xt: 0.3, r: 50 }],
            b_one_norms: vec![1.0, 1.5],
        };
        let a = run_regime_sweep(&grid).unwrap();
        let b = run_regime_sweep(&grid).unwrap();
        assert_eq!(a.len(), 8);
        for (x, y) in a.iter().zip(b.iter()) {
            assert_eq!(x.gamma_lambda.to_bits(), y.gamma_lambda.to_bits());
        }
    }
}
