//! Overlap estimators and their exact oracles.
//!
//! Two routes to mu = <B|A>: a single-ancilla Hadamard test whose
//! Bernoulli mean is gamma*lambda*mu (shot count scales as the inverse
//! square of that product), and iterative amplitude estimation on
//! a = (1 + gamma*lambda*mu)/2 (queries scale inversely). Both are
//! simulated at measurement-statistics level: the exact success
//! probability is computed from the encodings, then shots are drawn
//! from the matching distribution, so query accounting is faithful
//! while runs stay cheap. Direct baselines run the same machinery with
//! gamma*lambda = 1 for comparison, and self-measurement protocols
//! recover gamma and lambda from the encodings alone.

pub mod hl;
pub mod protocols;
pub mod sql;
pub mod wops;

use crate::encoders::{DmseEncoding, UbseEncoding};
use crate::{Error, Result};

pub use hl::{amplitude_estimation_run, direct_ae_baseline};
pub use protocols::{
    error_budget_split, estimate_gamma_protocol, estimate_lambda_protocol, BudgetSplit,
    ProtocolEstimate,
};
pub use sql::{direct_hadamard_baseline, hadamard_test_run};
pub use wops::{
    build_u1, build_u2, build_w, exact_hl_amplitude, exact_hl_amplitude_dense,
    exact_sql_expectation, exact_sql_expectation_dense, grover_apply, grover_operator,
    hl_initial_state,
};

/// Relative precision below which a target switches from relative to
/// additive mode, as a multiple of gamma*lambda.
pub const MU_FLOOR_FACTOR: f64 = 1e-6;

/// Cap on iterative-estimation rounds; hitting it flags the result.
pub const MAX_AE_ROUNDS: u64 = 60;

/// Which part of the overlap a task estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
pub enum Part {
    #[default]
    #[serde(rename = "real")]
    Real,
    #[serde(rename = "imag")]
    Imag,
}

impl Part {
    pub fn as_str(self) -> &'static str {
        match self {
            Part::Real => "real",
            Part::Imag => "imag",
        }
    }

    /// Selects this part of a complex value.
    pub fn of(self, z: crate::qcore::C64) -> f64 {
        match self {
            Part::Real => z.re,
            Part::Imag => z.im,
        }
    }
}

/// One estimation job: the encoded pair, the part to estimate, and the
/// precision/confidence/seed knobs.
#[derive(Debug, Clone)]
pub struct EstimationTask<'a> {
    pub part: Part,
    pub ubse: &'a UbseEncoding,
    pub dmse: &'a DmseEncoding,
    pub epsilon: f64,
    pub delta: f64,
    pub seed: u64,
}

impl EstimationTask<'_> {
    pub fn validate(&self) -> Result<()> {
        if self.ubse.n() != self.dmse.n() {
            return Err(Error::dim(format!(
                "encodings disagree on the system size: {} vs {}",
                self.ubse.n(),
                self.dmse.n()
            )));
        }
        check_precision(self.epsilon, self.delta)
    }

    /// Declared weight product gamma*lambda of the encodings.
    pub fn gamma_lambda(&self) -> f64 {
        self.dmse.gamma() * self.ubse.lambda()
    }
}

pub(crate) fn check_precision(epsilon: f64, delta: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::arg(format!("epsilon = {epsilon} outside (0, 1)")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::arg(format!("delta = {delta} outside (0, 1)")));
    }
    Ok(())
}

/// Outcome of a simulated estimation run with its query accounting.
#[derive(Debug, Clone, serde::Serialize)]
pub struct EstimationResult {
    /// Estimated value of the selected part of mu.
    pub estimate: f64,
    /// Oracle value the sampler was driven by.
    pub exact_value: f64,
    /// Total measurement shots.
    pub shots: u64,
    /// Queries to the block-encoding unitary and its inverse.
    pub queries_used: u64,
    /// Queries to the state-preparation unitary and its inverse,
    /// tallied separately.
    pub state_prep_queries: u64,
    /// Estimation rounds (1 for single-batch Hadamard tests).
    pub rounds: u64,
    /// False when the relative target was replaced by an additive one.
    pub relative_mode: bool,
    pub seed: u64,
    pub flags: Vec<String>,
}
