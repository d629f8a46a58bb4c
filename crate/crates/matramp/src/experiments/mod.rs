//! Scripted scenario runners: benchmark grids over the estimation
//! methods, the closed-form weight sweep, the two-copy design check,
//! and the thermal-state demonstration. Every runner is deterministic
//! given its seed list and emits rows ready for the table writers in
//! [`io`].

pub mod extreme;
pub mod gibbs;
pub mod io;
pub mod sweep;
pub mod two_design;

pub use extreme::{run_extreme_case, ExtremeReport, ExtremeTarget};
pub use gibbs::{gibbs_demo, random_two_local_hamiltonian, spectral_family_report, GibbsReport};
pub use io::{rows_to_csv, table_filename, write_json, write_table};
pub use sweep::{run_regime_sweep, RegimeGrid, SweepRow, TrotterPoint};
pub use two_design::{two_design_bound, two_design_check, two_design_exact_distance, TwoDesignReport};

use crate::encoders::{
    compile_circuit_cbe, compile_trotter_cbe, dmse_initial_product, ubse_from_bell_label,
    ubse_from_decomposition, BellLabel, CircuitIr, DmseEncoding, PauliHamiltonian, UbseEncoding,
};
use crate::estimators::{
    amplitude_estimation_run, direct_ae_baseline, direct_hadamard_baseline,
    exact_sql_expectation, hadamard_test_run, EstimationResult, EstimationTask, Part,
};
use crate::matrixize::BipartiteState;
use crate::qcore::{max_qubits, pauli, tensor, CMat, CVec, PureState, C64};
use crate::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Estimation route selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "indirect-sql")]
    IndirectSql,
    #[serde(rename = "indirect-hl")]
    IndirectHl,
    #[serde(rename = "direct-sql")]
    DirectSql,
    #[serde(rename = "direct-hl")]
    DirectHl,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::IndirectSql,
        Method::IndirectHl,
        Method::DirectSql,
        Method::DirectHl,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::IndirectSql => "indirect-sql",
            Method::IndirectHl => "indirect-hl",
            Method::DirectSql => "direct-sql",
            Method::DirectHl => "direct-hl",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "indirect-sql" => Ok(Method::IndirectSql),
            "indirect-hl" => Ok(Method::IndirectHl),
            "direct-sql" => Ok(Method::DirectSql),
            "direct-hl" => Ok(Method::DirectHl),
            other => Err(Error::arg(format!("unknown method {other:?}"))),
        }
    }

    fn is_direct(self) -> bool {
        matches!(self, Method::DirectSql | Method::DirectHl)
    }
}

/// One register factor: a computational basis label like "010" or an
/// explicit amplitude list (pairs of re/im), length a power of two.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FactorSpec {
    Basis(String),
    Amplitudes(Vec<[f64; 2]>),
}

impl FactorSpec {
    pub fn to_state(&self, n: usize) -> Result<PureState> {
        match self {
            FactorSpec::Basis(label) => {
                if label.len() != n {
                    return Err(Error::arg(format!(
                        "basis label {label:?} has {} bits, register has {n} qubits",
                        label.len()
                    )));
                }
                let mut idx = 0usize;
                for ch in label.chars() {
                    idx <<= 1;
                    match ch {
                        '0' => {}
                        '1' => idx |= 1,
                        other => {
                            return Err(Error::Parse(format!("bad basis bit {other:?}")));
                        }
                    }
                }
                PureState::new(crate::qcore::basis_state(n, idx))
            }
            FactorSpec::Amplitudes(amps) => {
                if amps.len() != 1 << n {
                    return Err(Error::arg(format!(
                        "amplitude list has {} entries, register needs {}",
                        amps.len(),
                        1 << n
                    )));
                }
                let v = CVec::from_iterator(
                    amps.len(),
                    amps.iter().map(|p| C64::new(p[0], p[1])),
                );
                PureState::new(v)
            }
        }
    }
}

/// State family for the density-encoded side.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum AStateSpec {
    /// Product of two n-qubit factors, encoded at weight 1/2.
    Product { upper: FactorSpec, lower: FactorSpec },
    /// Product initial state evolved by a compiled circuit on the
    /// doubled register.
    Circuit {
        upper: FactorSpec,
        lower: FactorSpec,
        circuit: CircuitIr,
    },
    /// Product initial state evolved by a compiled product formula.
    Trotter {
        upper: FactorSpec,
        lower: FactorSpec,
        hamiltonian: PauliHamiltonian,
    },
}

/// State family for the unitary-encoded side.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum BStateSpec {
    /// One Bell-pair species per qubit pair.
    Bell { labels: Vec<BellLabel> },
    /// Combination sum_i c_i (V_i (x) I) of Pauli-string unitaries;
    /// coefficients are normalised to a unit state at build time.
    Decomposition { terms: Vec<DecompTerm> },
}

/// One term of a Pauli decomposition: coefficient as [re, im] and a
/// Pauli string over the n row qubits.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecompTerm {
    pub coeff: [f64; 2],
    pub pauli: String,
}

/// A built scenario side pair ready to estimate.
pub struct ScenarioStates {
    pub dmse: DmseEncoding,
    pub ubse: UbseEncoding,
    /// Present when the effective encoded matrix is pure, as direct
    /// baselines require.
    pub a_pure: Option<BipartiteState>,
    pub b_pure: BipartiteState,
}

/// One benchmark grid: a state pair, precision knobs, and the
/// (method, seed) cells to run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchScenario {
    pub name: String,
    pub n: usize,
    pub a: AStateSpec,
    pub b: BStateSpec,
    #[serde(default)]
    pub part: Part,
    pub epsilon: f64,
    pub delta: f64,
    pub seeds: Vec<u64>,
    pub methods: Vec<Method>,
}

/// One result row; field order is the CSV column order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchRow {
    pub scenario: String,
    pub method: Method,
    pub n: usize,
    pub mu_exact: f64,
    pub estimate: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub shots: u64,
    /// Named `queries_used` in JSON to match the estimator records.
    #[serde(rename = "queries_used")]
    pub queries: u64,
    pub seed: u64,
}

pub fn build_a_states(spec: &AStateSpec, n: usize) -> Result<(DmseEncoding, Option<BipartiteState>)> {
    let product = |upper: &FactorSpec, lower: &FactorSpec| -> Result<(PureState, PureState)> {
        Ok((upper.to_state(n)?, lower.to_state(n)?))
    };
    match spec {
        AStateSpec::Product { upper, lower } => {
            let (pu, pl) = product(upper, lower)?;
            let enc = dmse_initial_product(&pu, &pl)?;
            let vec = pu.tensor(&pl)?;
            Ok((enc, Some(BipartiteState::new(vec)?)))
        }
        AStateSpec::Circuit {
            upper,
            lower,
            circuit,
        } => {
            if circuit.n != 2 * n {
                return Err(Error::dim(format!(
                    "circuit acts on {} qubits, scenario needs {}",
                    circuit.n,
                    2 * n
                )));
            }
            let (pu, pl) = product(upper, lower)?;
            let enc = dmse_initial_product(&pu, &pl)?;
            let cbe = compile_circuit_cbe(circuit)?;
            let evolved = cbe.apply_to_dmse(&enc)?;
            // The channel route is unitary here, so the effective state
            // stays pure: evolve the vector densely for the baselines.
            let mut amps = pu.tensor(&pl)?.into_amplitudes();
            circuit.apply(&mut amps)?;
            Ok((evolved, Some(BipartiteState::new(PureState::new(amps)?)?)))
        }
        AStateSpec::Trotter {
            upper,
            lower,
            hamiltonian,
        } => {
            if hamiltonian.n != 2 * n {
                return Err(Error::dim(format!(
                    "hamiltonian acts on {} qubits, scenario needs {}",
                    hamiltonian.n,
                    2 * n
                )));
            }
            let (pu, pl) = product(upper, lower)?;
            let enc = dmse_initial_product(&pu, &pl)?;
            let cbe = compile_trotter_cbe(hamiltonian)?;
            // The compiled channel is a proper mixture, so no pure
            // effective state exists for direct baselines.
            Ok((cbe.apply_to_dmse(&enc)?, None))
        }
    }
}

pub fn build_b_states(spec: &BStateSpec, n: usize) -> Result<UbseEncoding> {
    match spec {
        BStateSpec::Bell { labels } => {
            if labels.len() != n {
                return Err(Error::arg(format!(
                    "{} bell labels for {n} qubit pairs",
                    labels.len()
                )));
            }
            ubse_from_bell_label(labels)
        }
        BStateSpec::Decomposition { terms } => {
            if terms.is_empty() {
                return Err(Error::arg("decomposition needs at least one term"));
            }
            let mut built = Vec::with_capacity(terms.len());
            let mut sq = 0.0f64;
            for term in terms {
                if term.pauli.len() != n {
                    return Err(Error::arg(format!(
                        "pauli string {:?} has length {}, register has {n} qubits",
                        term.pauli,
                        term.pauli.len()
                    )));
                }
                let mut v = CMat::identity(1, 1);
                for ch in term.pauli.chars() {
                    v = tensor(&v, &pauli(ch)?)?;
                }
                let c = C64::new(term.coeff[0], term.coeff[1]);
                sq += c.norm_sqr();
                built.push((c, v));
            }
            if sq <= 0.0 {
                return Err(Error::arg("decomposition coefficients are all zero"));
            }
            // Distinct Pauli strings are Frobenius-orthogonal, so unit
            // coefficient 2-norm makes the combination a unit state.
            let scale = C64::new(1.0 / sq.sqrt(), 0.0);
            let terms: Vec<(C64, CMat)> = built.into_iter().map(|(c, v)| (c * scale, v)).collect();
            ubse_from_decomposition(&terms)
        }
    }
}

fn ancilla_count(rank: usize) -> usize {
    rank.next_power_of_two().trailing_zeros() as usize
}

impl BenchScenario {
    /// Builds the encodings and checks every requested method fits the
    /// qubit budget.
    pub fn build(&self) -> Result<ScenarioStates> {
        if self.n == 0 {
            return Err(Error::arg("scenario needs at least one qubit"));
        }
        if self.methods.is_empty() {
            return Err(Error::arg("scenario lists no methods"));
        }
        let (dmse, a_pure) = build_a_states(&self.a, self.n)?;
        let ubse = build_b_states(&self.b, self.n)?;
        EstimationTask {
            part: self.part,
            ubse: &ubse,
            dmse: &dmse,
            epsilon: self.epsilon,
            delta: self.delta,
            seed: 0,
        }
        .validate()?;
        let b_pure = ubse.encoded_state()?;
        let m = ancilla_count(dmse.rho().rank());
        for &method in &self.methods {
            let needed = match method {
                Method::IndirectSql => 3 + self.n + ubse.k(),
                Method::IndirectHl => 4 + m + self.n + ubse.k(),
                Method::DirectSql => 1 + 2 * self.n,
                Method::DirectHl => 1 + 2 * self.n,
            };
            if needed > max_qubits() {
                return Err(Error::ResourceLimit(format!(
                    "{} needs {needed} qubits, budget is {}",
                    method.as_str(),
                    max_qubits()
                )));
            }
            if method.is_direct() && a_pure.is_none() {
                return Err(Error::arg(format!(
                    "{} needs a pure state family",
                    method.as_str()
                )));
            }
        }
        Ok(ScenarioStates {
            dmse,
            ubse,
            a_pure,
            b_pure,
        })
    }

    /// Runs every (method, seed) cell in parallel; rows come back in
    /// method-major, seed-minor order regardless of thread timing.
    pub fn run(&self) -> Result<Vec<BenchRow>> {
        let states = self.build()?;
        let v = exact_sql_expectation(&states.ubse, &states.dmse, self.part)?;
        let gl = states.dmse.gamma() * states.ubse.lambda();
        let mu_exact = v / gl;
        let cells: Vec<(usize, Method, u64)> = self
            .methods
            .iter()
            .flat_map(|&m| self.seeds.iter().map(move |&s| (m, s)))
            .enumerate()
            .map(|(i, (m, s))| (i, m, s))
            .collect();
        let mut results: Vec<(usize, BenchRow)> = cells
            .par_iter()
            .map(|&(i, method, seed)| {
                let r = self.run_cell(&states, method, seed)?;
                Ok((
                    i,
                    BenchRow {
                        scenario: self.name.clone(),
                        method,
                        n: self.n,
                        mu_exact,
                        estimate: r.estimate,
                        epsilon: self.epsilon,
                        delta: self.delta,
                        shots: r.shots,
                        queries: r.queries_used,
                        seed,
                    },
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        results.sort_by_key(|&(i, _)| i);
        Ok(results.into_iter().map(|(_, row)| row).collect())
    }

    fn run_cell(
        &self,
        states: &ScenarioStates,
        method: Method,
        seed: u64,
    ) -> Result<EstimationResult> {
        let task = EstimationTask {
            part: self.part,
            ubse: &states.ubse,
            dmse: &states.dmse,
            epsilon: self.epsilon,
            delta: self.delta,
            seed,
        };
        match method {
            Method::IndirectSql => hadamard_test_run(&task),
            Method::IndirectHl => amplitude_estimation_run(&task),
            Method::DirectSql => direct_hadamard_baseline(
                states.a_pure.as_ref().expect("checked in build"),
                &states.b_pure,
                self.part,
                self.epsilon,
                self.delta,
                seed,
            ),
            Method::DirectHl => direct_ae_baseline(
                states.a_pure.as_ref().expect("checked in build"),
                &states.b_pure,
                self.part,
                self.epsilon,
                self.delta,
                seed,
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_scenario() -> BenchScenario {
        BenchScenario {
            name: "tiny".into(),
            n: 1,
            a: AStateSpec::Product {
                upper: FactorSpec::Basis("0".into()),
                lower: FactorSpec::Basis("0".into()),
            },
            b: BStateSpec::Bell {
                labels: vec![BellLabel::PhiPlus],
            },
            part: Part::Real,
            epsilon: 0.2,
            delta: 0.1,
            seeds: vec![1, 2],
            methods: Method::ALL.to_vec(),
        }
    }

    #[test]
    fn scenario_rows_are_ordered_and_deterministic() {
        let sc = tiny_scenario();
        let rows = sc.run().unwrap();
        assert_eq!(rows.len(), 8);
        // Product a against the bell pair: mu = 1/sqrt(2).
        let mu = std::f64::consts::FRAC_1_SQRT_2;
        for row in &rows {
            assert!((row.mu_exact - mu).abs() < 1e-12);
        }
        assert_eq!(rows[0].method, Method::IndirectSql);
        assert_eq!(rows[0].seed, 1);
        assert_eq!(rows[1].seed, 2);
        assert_eq!(rows[2].method, Method::IndirectHl);
        let again = sc.run().unwrap();
        for (a, b) in rows.iter().zip(again.iter()) {
            assert_eq!(a.estimate.to_bits(), b.estimate.to_bits());
            assert_eq!(a.queries, b.queries);
        }
    }

    #[test]
    fn direct_methods_demand_a_pure_family() {
        let mut sc = tiny_scenario();
        sc.n = 1;
        sc.a = AStateSpec::Trotter {
            upper: FactorSpec::Basis("0".into()),
            lower: FactorSpec::Basis("0".into()),
            hamiltonian: PauliHamiltonian {
                n: 2,
                t: 0.4,
                r: 8,
                terms: vec![crate::encoders::PauliTerm {
                    coeff: 1.0,
                    pauli: "XX".into(),
                }],
            },
        };
        sc.methods = vec![Method::DirectSql];
        assert!(sc.build().is_err());
        sc.methods = vec![Method::IndirectSql];
        assert!(sc.build().is_ok());
    }

    #[test]
    fn factor_specs_parse_both_forms() {
        let basis = FactorSpec::Basis("10".into()).to_state(2).unwrap();
        assert!((basis.amplitudes()[2].re - 1.0).abs() < 1e-15);
        let amps = FactorSpec::Amplitudes(vec![[0.6, 0.0], [0.0, 0.8]])
            .to_state(1)
            .unwrap();
        assert!((amps.amplitudes()[1].im - 0.8).abs() < 1e-15);
        assert!(FactorSpec::Basis("012".into()).to_state(3).is_err());
        assert!(FactorSpec::Basis("01".into()).to_state(3).is_err());
    }

    #[test]
    fn circuit_family_evolves_the_encoding() {
        let sc = BenchScenario {
            name: "circ".into(),
            n: 1,
            a: AStateSpec::Circuit {
                upper: FactorSpec::Basis("0".into()),
                lower: FactorSpec::Basis("0".into()),
                circuit: CircuitIr::new(
                    2,
                    vec![
                        crate::encoders::Gate::one("h", 0),
                        crate::encoders::Gate::two("cnot", 0, 1),
                    ],
                )
                .unwrap(),
            },
            b: BStateSpec::Bell {
                labels: vec![BellLabel::PhiPlus],
            },
            part: Part::Real,
            epsilon: 0.2,
            delta: 0.1,
            seeds: vec![3],
            methods: vec![Method::IndirectSql, Method::DirectSql],
        };
        let states = sc.build().unwrap();
        // One crossing gate: the channel weight drops by 1/sqrt(2).
        assert!((states.dmse.gamma() - 0.5 / 2f64.sqrt()).abs() < 1e-12);
        // H then CNOT on |00> is the bell pair itself: mu = 1.
        let rows = sc.run().unwrap();
        for row in &rows {
            assert!((row.mu_exact - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn decomposition_terms_are_normalised() {
        let spec = BStateSpec::Decomposition {
            terms: vec![
                DecompTerm {
                    coeff: [3.0, 0.0],
                    pauli: "I".into(),
                },
                DecompTerm {
                    coeff: [0.0, 4.0],
                    pauli: "X".into(),
                },
            ],
        };
        let u = build_b_states(&spec, 1).unwrap();
        // Coefficients scale to (3/5, 4i/5); lambda = sqrt(2)/(7/5).
        assert!((u.lambda() - 2f64.sqrt() * 5.0 / 7.0).abs() < 1e-12);
    }
}
