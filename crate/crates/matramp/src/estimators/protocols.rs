//! Self-measurement of the encoding weights.
//!
//! The normalisation constants gamma and lambda are observable on the
//! encodings themselves: two copies of the density encoding expose
//! gamma^2 through a swap-style correlation between off-diagonal
//! blocks, and one query to the block unitary exposes lambda^2 through
//! the flagged-sector population. Both routines evaluate the exact
//! outcome distributions by contraction and, when a shot count is
//! given, draw binomial counts from them.

use crate::encoders::{DmseEncoding, UbseEncoding};
use crate::{Error, Result};
use rand::distributions::Distribution;
use rand_chacha::ChaCha12Rng;
use rand_distr::Binomial;

/// Outcome of a weight-measurement protocol.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ProtocolEstimate {
    /// Measured (or exact-mode) value of the weight.
    pub estimate: f64,
    /// Value computed by direct contraction.
    pub exact: f64,
    /// Delta-method standard error; zero in exact mode.
    pub stderr: f64,
    /// Shots consumed; zero means exact mode.
    pub shots: u64,
    /// Set when a negative mean was clipped to zero before the root.
    pub clipped: bool,
}

/// Per-factor budget for combining three multiplicative estimates.
#[derive(Debug, Clone, Copy)]
pub struct BudgetSplit {
    /// Relative accuracy to demand from each factor.
    pub per_factor: f64,
    /// Set when the requested total is outside the small-error regime
    /// where first-order combination is trustworthy.
    pub warn: bool,
}

fn binomial_draw(n: u64, p: f64, rng: &mut ChaCha12Rng) -> Result<u64> {
    Ok(Binomial::new(n, p.clamp(0.0, 1.0))
        .map_err(|e| Error::Numerical(format!("binomial setup: {e}")))?
        .sample(rng))
}

/// Measures gamma on two copies of the density encoding.
///
/// Writing T0 = tr(rho_00) tr(rho_11) and Cc = tr(rho_01 rho_10), the
/// protocol's three outcomes occur with probabilities T0 + Cc, T0 - Cc
/// and 1 - 2 T0, and the signed average of the first two equals
/// 2 gamma^2. `shots: None` skips sampling and reports the exact root.
pub fn estimate_gamma_protocol(
    enc: &DmseEncoding,
    shots: Option<u64>,
    rng: &mut ChaCha12Rng,
) -> Result<ProtocolEstimate> {
    let r00 = enc.block(0, 0);
    let r11 = enc.block(1, 1);
    let r01 = enc.block(0, 1);
    let r10 = enc.block(1, 0);
    let t0 = r00.trace().re * r11.trace().re;
    let cc = (&r01 * &r10).trace().re;
    let exact = cc.max(0.0).sqrt();
    let Some(n) = shots else {
        return Ok(ProtocolEstimate {
            estimate: exact,
            exact,
            stderr: 0.0,
            shots: 0,
            clipped: false,
        });
    };
    if n == 0 {
        return Err(Error::arg("shot count must be positive"));
    }
    let p_plus = (t0 + cc).clamp(0.0, 1.0);
    let p_minus = (t0 - cc).max(0.0);
    let k_plus = binomial_draw(n, p_plus, rng)?;
    let k_minus = if p_plus >= 1.0 {
        0
    } else {
        binomial_draw(n - k_plus, (p_minus / (1.0 - p_plus)).clamp(0.0, 1.0), rng)?
    };
    let nf = n as f64;
    let mean = (k_plus as f64 - k_minus as f64) / nf;
    let clipped = mean < 0.0;
    let estimate = (mean.max(0.0) / 2.0).sqrt();
    let var = ((k_plus + k_minus) as f64 / nf - mean * mean).max(0.0);
    let sigma_mean = (var / nf).sqrt();
    let stderr = if estimate > 0.0 {
        sigma_mean / (4.0 * estimate)
    } else {
        f64::INFINITY
    };
    Ok(ProtocolEstimate {
        estimate,
        exact,
        stderr,
        shots: n,
        clipped,
    })
}

/// Measures lambda with single queries to the block unitary.
///
/// Preparing the flagged column on a maximally mixed input and testing
/// for the flag sector succeeds with probability (1 + v)/2 where
/// v = ||block||_F^2 / 4^n, so lambda^2 = 4^n v is read off the mean.
pub fn estimate_lambda_protocol(
    u: &UbseEncoding,
    shots: Option<u64>,
    rng: &mut ChaCha12Rng,
) -> Result<ProtocolEstimate> {
    let block = u.block();
    let scale = 4f64.powi(u.n() as i32);
    let v = block.iter().map(|z| z.norm_sqr()).sum::<f64>() / scale;
    let exact = (scale * v).sqrt();
    let Some(n) = shots else {
        return Ok(ProtocolEstimate {
            estimate: exact,
            exact,
            stderr: 0.0,
            shots: 0,
            clipped: false,
        });
    };
    if n == 0 {
        return Err(Error::arg("shot count must be positive"));
    }
    let p = (0.5 * (1.0 + v)).clamp(0.0, 1.0);
    let k = binomial_draw(n, p, rng)?;
    let nf = n as f64;
    let mean = 2.0 * (k as f64) / nf - 1.0;
    let clipped = mean < 0.0;
    let estimate = (scale * mean.max(0.0)).sqrt();
    let sigma_mean = 2.0 * (p * (1.0 - p) / nf).sqrt();
    let stderr = if estimate > 0.0 {
        scale * sigma_mean / (2.0 * estimate)
    } else {
        f64::INFINITY
    };
    Ok(ProtocolEstimate {
        estimate,
        exact,
        stderr,
        shots: n,
        clipped,
    })
}

/// Splits a total relative error across the three factors of the
/// normalised readout (the measured mean and the two weights).
///
/// Independent first-order errors add in quadrature, so each factor
/// receives epsilon / sqrt(3). Outside (0, 0.3) the linearisation is
/// shaky and the split is returned with a warning flag.
pub fn error_budget_split(epsilon: f64) -> Result<BudgetSplit> {
    if !(epsilon >= 0.0) {
        return Err(Error::arg(format!("total budget {epsilon} must be nonnegative")));
    }
    Ok(BudgetSplit {
        per_factor: epsilon / 3f64.sqrt(),
        warn: !(epsilon > 0.0 && epsilon < 0.3),
    })
}
