//! Python bindings over the encoding and estimation layer.
//!
//! Complex data crosses the boundary as (re, im) tuples and matrices as
//! row-major tuple lists, so the module builds without any Python-side
//! numeric dependency. Scripted benchmark runs take the same JSON
//! scenario text as the command line and hand the rows back as JSON.

use matramp::encoders::{
    canonical_angles as kak_angles, dmse_initial_product, dmse_optimal,
    interaction_eta as eta_of, ubse_from_bell_label, BellLabel,
};
use matramp::estimators::{
    estimate_gamma_protocol, estimate_lambda_protocol, exact_sql_expectation, Part,
    ProtocolEstimate,
};
use matramp::experiments::{build_b_states, BStateSpec, BenchScenario, DecompTerm};
use matramp::matrixize::{matrixize, BipartiteState};
use matramp::qcore::{substream, CMat, CVec, PureState, C64};
use matramp::verify::run_invariant_suite;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: matramp::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Amplitude tuples to a unit state; the length must be a power of two.
fn state_from_pairs(amps: &[(f64, f64)]) -> PyResult<PureState> {
    let v = CVec::from_iterator(amps.len(), amps.iter().map(|&(re, im)| C64::new(re, im)));
    PureState::new(v).map_err(err)
}

fn protocol_dict<'py>(py: Python<'py>, p: &ProtocolEstimate) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("estimate", p.estimate)?;
    d.set_item("exact", p.exact)?;
    d.set_item("stderr", p.stderr)?;
    d.set_item("shots", p.shots)?;
    d.set_item("clipped", p.clipped)?;
    Ok(d)
}

/// Purified density encoding carrying a matrix at weight gamma.
#[pyclass(name = "Dmse", frozen)]
struct PyDmse {
    inner: matramp::encoders::DmseEncoding,
}

#[pymethods]
impl PyDmse {
    /// Largest-weight encoding of a unit vector on 2n qubits.
    #[staticmethod]
    fn optimal(amplitudes: Vec<(f64, f64)>) -> PyResult<Self> {
        let psi = state_from_pairs(&amplitudes)?;
        let m = matrixize(psi.amplitudes()).map_err(err)?;
        Ok(Self {
            inner: dmse_optimal(&m).map_err(err)?,
        })
    }

    /// Weight-1/2 encoding of the product of two unit factors.
    #[staticmethod]
    fn product(upper: Vec<(f64, f64)>, lower: Vec<(f64, f64)>) -> PyResult<Self> {
        let u = state_from_pairs(&upper)?;
        let l = state_from_pairs(&lower)?;
        Ok(Self {
            inner: dmse_initial_product(&u, &l).map_err(err)?,
        })
    }

    /// Qubits per side of the encoded matrix.
    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn gamma(&self) -> f64 {
        self.inner.gamma()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rho().rank()
    }

    /// Two-copy weight protocol; exact contraction when shots is None.
    #[pyo3(signature = (shots=None, seed=7))]
    fn measure_gamma<'py>(
        &self,
        py: Python<'py>,
        shots: Option<u64>,
        seed: u64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let mut rng = substream(seed, &[0xF0]);
        let p = estimate_gamma_protocol(&self.inner, shots, &mut rng).map_err(err)?;
        protocol_dict(py, &p)
    }
}

/// Unitary block encoding carrying a matrix at scale lambda.
#[pyclass(name = "Ubse", frozen)]
struct PyUbse {
    inner: matramp::encoders::UbseEncoding,
}

#[pymethods]
impl PyUbse {
    /// Ancilla-free encoding from one Bell species per qubit pair; the
    /// labels are "phi+", "phi-", "psi+" or "psi-".
    #[staticmethod]
    fn from_bell(labels: Vec<String>) -> PyResult<Self> {
        let labels = labels
            .iter()
            .map(|s| BellLabel::parse(s))
            .collect::<matramp::Result<Vec<_>>>()
            .map_err(err)?;
        Ok(Self {
            inner: ubse_from_bell_label(&labels).map_err(err)?,
        })
    }

    /// Prepare/select encoding of a Pauli-string combination from
    /// (re, im, pauli) terms; coefficients are rescaled to unit 2-norm
    /// so the encoded matrix is a state.
    #[staticmethod]
    fn from_paulis(terms: Vec<(f64, f64, String)>) -> PyResult<Self> {
        let n = terms.first().map(|t| t.2.len()).unwrap_or(0);
        let spec = BStateSpec::Decomposition {
            terms: terms
                .into_iter()
                .map(|(re, im, pauli)| DecompTerm {
                    coeff: [re, im],
                    pauli,
                })
                .collect(),
        };
        Ok(Self {
            inner: build_b_states(&spec, n).map_err(err)?,
        })
    }

    /// Qubits per side of the encoded matrix.
    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    /// Ancilla qubits of the prepare/select sandwich.
    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn lambda_(&self) -> f64 {
        self.inner.lambda()
    }

    /// Amplitudes of the encoded matrix read as a 2n-qubit state.
    fn encoded_amplitudes(&self) -> PyResult<Vec<(f64, f64)>> {
        let s = self.inner.encoded_state().map_err(err)?;
        Ok(s.state().amplitudes().iter().map(|z| (z.re, z.im)).collect())
    }

    /// Scale protocol on the doubled register; exact when shots is None.
    #[pyo3(signature = (shots=None, seed=7))]
    fn measure_lambda<'py>(
        &self,
        py: Python<'py>,
        shots: Option<u64>,
        seed: u64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let mut rng = substream(seed, &[0xF1]);
        let p = estimate_lambda_protocol(&self.inner, shots, &mut rng).map_err(err)?;
        protocol_dict(py, &p)
    }
}

/// <B|A> of the two encoded matrices as (re, im), by exact contraction.
#[pyfunction]
fn exact_overlap(b: &PyUbse, a: &PyDmse) -> PyResult<(f64, f64)> {
    let gl = a.inner.gamma() * b.inner.lambda();
    let re = exact_sql_expectation(&b.inner, &a.inner, Part::Real).map_err(err)?;
    let im = exact_sql_expectation(&b.inner, &a.inner, Part::Imag).map_err(err)?;
    Ok((re / gl, im / gl))
}

/// Runs one benchmark scenario; takes and returns JSON text.
#[pyfunction]
fn estimate(config_json: &str) -> PyResult<String> {
    let scenario: BenchScenario = serde_json::from_str(config_json)
        .map_err(|e| PyValueError::new_err(format!("scenario JSON: {e}")))?;
    let rows = scenario.run().map_err(err)?;
    serde_json::to_string_pretty(&rows).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Schmidt coefficients of a 2n-qubit state across the middle cut,
/// descending with zeros kept.
#[pyfunction]
fn schmidt_coefficients(amplitudes: Vec<(f64, f64)>) -> PyResult<Vec<f64>> {
    let b = BipartiteState::new(state_from_pairs(&amplitudes)?).map_err(err)?;
    b.schmidt_coefficients().map_err(err)
}

/// Renyi data of the cut: schmidt, h_inf, h_half, lambda_max, gamma_max.
#[pyfunction]
fn entropy_report<'py>(
    py: Python<'py>,
    amplitudes: Vec<(f64, f64)>,
) -> PyResult<Bound<'py, PyDict>> {
    let b = BipartiteState::new(state_from_pairs(&amplitudes)?).map_err(err)?;
    let rep = b.entropy_report().map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("schmidt", rep.schmidt)?;
    d.set_item("h_inf", rep.h_inf)?;
    d.set_item("h_half", rep.h_half)?;
    d.set_item("lambda_max", rep.lambda_max)?;
    d.set_item("gamma_max", rep.gamma_max)?;
    Ok(d)
}

/// Canonical angles (tx, ty, tz) of a two-qubit unitary given as 16
/// row-major (re, im) entries.
#[pyfunction]
fn canonical_angles(matrix: Vec<(f64, f64)>) -> PyResult<(f64, f64, f64)> {
    if matrix.len() != 16 {
        return Err(PyValueError::new_err(format!(
            "want 16 row-major entries, got {}",
            matrix.len()
        )));
    }
    let m = CMat::from_row_iterator(4, 4, matrix.iter().map(|&(re, im)| C64::new(re, im)));
    let t = kak_angles(&m).map_err(err)?;
    Ok((t[0], t[1], t[2]))
}

/// Interaction weight of the canonical gate with the given angles.
#[pyfunction]
fn interaction_eta(angles: (f64, f64, f64)) -> f64 {
    eta_of([angles.0, angles.1, angles.2])
}

/// Runs the cross-checking suite; rows are (name, pass, detail).
#[pyfunction]
#[pyo3(signature = (seed=7))]
fn verify_suite(seed: u64) -> Vec<(String, bool, String)> {
    run_invariant_suite(seed)
        .into_iter()
        .map(|c| (c.name.to_string(), c.pass, c.detail))
        .collect()
}

#[pymodule]
fn matramp_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDmse>()?;
    m.add_class::<PyUbse>()?;
    m.add_function(wrap_pyfunction!(exact_overlap, m)?)?;
    m.add_function(wrap_pyfunction!(estimate, m)?)?;
    m.add_function(wrap_pyfunction!(schmidt_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(entropy_report, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_angles, m)?)?;
    m.add_function(wrap_pyfunction!(interaction_eta, m)?)?;
    m.add_function(wrap_pyfunction!(verify_suite, m)?)?;
    Ok(())
}
