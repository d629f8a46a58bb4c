//! Single-test overlap estimation: one Hadamard-test Bernoulli batch.
//!
//! The test statistic has mean gamma*lambda*mu, so hitting a relative
//! target epsilon on mu needs on the order of
//! (gamma*lambda*|mu|*epsilon)^-2 shots; the whole batch is drawn as a
//! single binomial sample.

use super::wops::exact_sql_expectation;
use super::{check_precision, EstimationResult, EstimationTask, MU_FLOOR_FACTOR};
use crate::matrixize::BipartiteState;
use crate::qcore::{inner_product, substream};
use crate::{Error, Result};
use rand::distributions::Distribution;
use rand_distr::Binomial;

/// Hoeffding shot-count constant for the two-sided bound.
pub const HOEFFDING_C: f64 = 2.0;

/// Shot count for an additive target `t` on the test mean at
/// confidence 1 - delta.
fn hoeffding_shots(t: f64, delta: f64) -> Result<u64> {
    let raw = (HOEFFDING_C * (2.0 / delta).ln() / (t * t)).ceil();
    if !(raw >= 1.0 && raw <= 1e15) {
        return Err(Error::ResourceLimit(format!(
            "shot budget {raw:.3e} for additive target {t:.3e} is not serviceable"
        )));
    }
    Ok(raw as u64)
}

/// Shared single-batch engine: the test observable has exact mean `v`
/// with normalisation `gl` (estimate = empirical mean / gl). Stream ids
/// keep indirect and direct draws independent.
pub(crate) fn run_single_test(
    v: f64,
    gl: f64,
    epsilon: f64,
    delta: f64,
    seed: u64,
    stream: u64,
) -> Result<EstimationResult> {
    check_precision(epsilon, delta)?;
    if !(gl > 0.0) {
        return Err(Error::arg(format!("weight product {gl} must be positive")));
    }
    let mu = v / gl;
    let mut flags = Vec::new();
    let relative_mode = mu.abs() >= MU_FLOOR_FACTOR * gl;
    let target = if relative_mode {
        gl * mu.abs() * epsilon / 2.0
    } else {
        flags.push("additive-target".into());
        gl * epsilon / 2.0
    };
    let shots = hoeffding_shots(target, delta)?;
    let p = (0.5 * (1.0 + v)).clamp(0.0, 1.0);
    let mut rng = substream(seed, &[0x51, stream]);
    let hits = Binomial::new(shots, p)
        .map_err(|e| Error::Numerical(format!("binomial setup: {e}")))?
        .sample(&mut rng);
    let mean = 2.0 * (hits as f64 / shots as f64) - 1.0;
    Ok(EstimationResult {
        estimate: mean / gl,
        exact_value: mu,
        shots,
        queries_used: shots,
        state_prep_queries: shots,
        rounds: 1,
        relative_mode,
        seed,
        flags,
    })
}

/// Runs the encoded single-test estimator: Bernoulli sampling at the
/// exact test probability, shots sized for a relative epsilon on mu.
pub fn hadamard_test_run(task: &EstimationTask) -> Result<EstimationResult> {
    task.validate()?;
    let v = exact_sql_expectation(task.ubse, task.dmse, task.part)?;
    run_single_test(
        v,
        task.gamma_lambda(),
        task.epsilon,
        task.delta,
        task.seed,
        1,
    )
}

/// Unencoded baseline: the same test run directly on the pure states,
/// so the weight product is one.
pub fn direct_hadamard_baseline(
    a: &BipartiteState,
    b: &BipartiteState,
    part: super::Part,
    epsilon: f64,
    delta: f64,
    seed: u64,
) -> Result<EstimationResult> {
    if a.n() != b.n() {
        return Err(Error::dim("states differ in size"));
    }
    let mu = part.of(inner_product(
        b.state().amplitudes(),
        a.state().amplitudes(),
    ));
    run_single_test(mu, 1.0, epsilon, delta, seed, 2)
}
