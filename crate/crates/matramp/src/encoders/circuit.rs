//! Circuit and Hamiltonian input formats.
//!
//! Circuits are flat gate lists in JSON:
//! `{"n": 2, "gates": [{"name": "cnot", "qubits": [0, 2]},
//! {"name": "rx", "qubits": [1], "theta": 0.3}]}`. The `matrix` gate
//! carries an explicit unitary as row-major `[re, im]` pairs. The JSON `n`
//! is the per-side width: circuits act on a doubled register, so the file
//! above describes a 4-qubit circuit whose interaction cut sits at qubit 2.
//! Hamiltonians are real combinations of Pauli strings:
//! `{"t": 1.0, "r": 0, "terms": [{"coeff": 0.5, "pauli": "XZXZ"}]}`
//! (`r = 0` asks for the default subdivision count; the register width is
//! the string length).

use crate::qcore::{
    apply_one_qubit, apply_two_qubit, check_qubit_budget, identity, is_unitary, pauli, tensor,
    CMat, CVec, C64, TOL_NORM,
};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// One gate application. `qubits` order matters: for `cnot` the first
/// entry is the control; for `matrix` the first entry indexes the more
/// significant bit of the supplied matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Gate {
    pub name: String,
    pub qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<[f64; 2]>>,
}

impl Gate {
    pub fn one(name: &str, qubit: usize) -> Self {
        Gate {
            name: name.into(),
            qubits: vec![qubit],
            theta: None,
            matrix: None,
        }
    }

    pub fn rotation(name: &str, qubit: usize, theta: f64) -> Self {
        Gate {
            name: name.into(),
            qubits: vec![qubit],
            theta: Some(theta),
            matrix: None,
        }
    }

    pub fn two(name: &str, a: usize, b: usize) -> Self {
        Gate {
            name: name.into(),
            qubits: vec![a, b],
            theta: None,
            matrix: None,
        }
    }

    pub fn from_matrix(qubits: Vec<usize>, m: &CMat) -> Self {
        let flat = m
            .row_iter()
            .flat_map(|r| r.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>())
            .collect();
        Gate {
            name: "matrix".into(),
            qubits,
            theta: None,
            matrix: Some(flat),
        }
    }

    fn arity(&self) -> Result<usize> {
        let want = match self.name.as_str() {
            "h" | "x" | "y" | "z" | "s" | "t" | "rx" | "ry" | "rz" => 1,
            "cnot" | "cz" | "swap" => 2,
            "matrix" => match self.qubits.len() {
                1 | 2 => self.qubits.len(),
                k => {
                    return Err(Error::arg(format!(
                        "matrix gate supports 1 or 2 qubits, got {k}"
                    )))
                }
            },
            other => return Err(Error::Parse(format!("unknown gate name {other:?}"))),
        };
        if self.qubits.len() != want {
            return Err(Error::arg(format!(
                "gate {:?} takes {want} qubit(s), got {}",
                self.name,
                self.qubits.len()
            )));
        }
        if want == 2 && self.qubits[0] == self.qubits[1] {
            return Err(Error::arg(format!(
                "gate {:?} needs two distinct qubits",
                self.name
            )));
        }
        Ok(want)
    }

    fn needs_theta(&self) -> bool {
        matches!(self.name.as_str(), "rx" | "ry" | "rz")
    }

    /// The gate's unitary in its own local basis (2x2 or 4x4).
    pub fn unitary(&self) -> Result<CMat> {
        self.arity()?;
        if self.needs_theta() != self.theta.is_some() {
            return Err(Error::arg(format!(
                "gate {:?} and theta presence disagree",
                self.name
            )));
        }
        let c = |re: f64, im: f64| C64::new(re, im);
        let m = match self.name.as_str() {
            "h" => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                CMat::from_row_slice(2, 2, &[c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)])
            }
            "x" => pauli('X')?,
            "y" => pauli('Y')?,
            "z" => pauli('Z')?,
            "s" => CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)]),
            "t" => {
                let p = std::f64::consts::FRAC_PI_4;
                CMat::from_row_slice(
                    2,
                    2,
                    &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(p.cos(), p.sin())],
                )
            }
            "rx" | "ry" | "rz" => {
                let axis = self.name.as_bytes()[1].to_ascii_uppercase() as char;
                let half = self.theta.unwrap() / 2.0;
                identity(2).scale(half.cos())
                    - pauli(axis)?.map(|z| z * c(0.0, half.sin()))
            }
            "cnot" => {
                let mut m = identity(4);
                m[(2, 2)] = c(0.0, 0.0);
                m[(3, 3)] = c(0.0, 0.0);
                m[(2, 3)] = c(1.0, 0.0);
                m[(3, 2)] = c(1.0, 0.0);
                m
            }
            "cz" => {
                let mut m = identity(4);
                m[(3, 3)] = c(-1.0, 0.0);
                m
            }
            "swap" => {
                let mut m = CMat::zeros(4, 4);
                m[(0, 0)] = c(1.0, 0.0);
                m[(1, 2)] = c(1.0, 0.0);
                m[(2, 1)] = c(1.0, 0.0);
                m[(3, 3)] = c(1.0, 0.0);
                m
            }
            "matrix" => {
                let d = 1usize << self.qubits.len();
                let flat = self
                    .matrix
                    .as_ref()
                    .ok_or_else(|| Error::arg("matrix gate without matrix payload"))?;
                if flat.len() != d * d {
                    return Err(Error::dim(format!(
                        "matrix payload has {} entries, want {}",
                        flat.len(),
                        d * d
                    )));
                }
                CMat::from_fn(d, d, |i, j| {
                    let [re, im] = flat[i * d + j];
                    c(re, im)
                })
            }
            _ => unreachable!("arity() vets names"),
        };
        if self.name == "matrix" && !is_unitary(&m, TOL_NORM) {
            return Err(Error::NotUnitary("matrix gate payload".into()));
        }
        Ok(m)
    }
}

/// A gate list on a fixed-width register.
///
/// `n` is the full register width. Circuits describe joint evolutions
/// of a row/column register pair, so the JSON form names the per-side
/// width instead: `{"n": 2, ...}` on disk is a 4-qubit circuit whose
/// interaction cut sits at qubit 2.
#[derive(Debug, Clone)]
pub struct CircuitIr {
    pub n: usize,
    pub gates: Vec<Gate>,
}

#[derive(Serialize, Deserialize)]
struct CircuitFile {
    n: usize,
    gates: Vec<Gate>,
}

impl Serialize for CircuitIr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.n % 2 != 0 {
            return Err(serde::ser::Error::custom(
                "only circuits on doubled registers have an on-disk form",
            ));
        }
        CircuitFile {
            n: self.n / 2,
            gates: self.gates.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CircuitIr {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let f = CircuitFile::deserialize(d)?;
        Ok(CircuitIr {
            n: f.n * 2,
            gates: f.gates,
        })
    }
}

impl CircuitIr {
    pub fn new(n: usize, gates: Vec<Gate>) -> Result<Self> {
        let c = CircuitIr { n, gates };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        check_qubit_budget(self.n)?;
        if self.n == 0 {
            return Err(Error::arg("circuit needs at least one qubit"));
        }
        for g in &self.gates {
            g.arity()?;
            if let Some(&q) = g.qubits.iter().find(|&&q| q >= self.n) {
                return Err(Error::arg(format!(
                    "gate {:?} touches qubit {q}, register has {}",
                    g.name, self.n
                )));
            }
            g.unitary()?;
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let c: CircuitIr =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("circuit JSON: {e}")))?;
        c.validate()?;
        Ok(c)
    }

    /// Odd-width circuits have no on-disk form, so this can fail.
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Parse(format!("circuit JSON: {e}")))
    }

    /// Applies every gate in order to a statevector.
    pub fn apply(&self, state: &mut CVec) -> Result<()> {
        for g in &self.gates {
            let u = g.unitary()?;
            match g.qubits.len() {
                1 => apply_one_qubit(state, self.n, g.qubits[0], &u)?,
                _ => apply_two_qubit(state, self.n, g.qubits[0], g.qubits[1], &u)?,
            }
        }
        Ok(())
    }

    /// Dense unitary of the whole circuit (column-by-column application).
    pub fn unitary(&self) -> Result<CMat> {
        let d = 1usize << self.n;
        let mut out = CMat::zeros(d, d);
        for j in 0..d {
            let mut col = CVec::zeros(d);
            col[j] = C64::new(1.0, 0.0);
            self.apply(&mut col)?;
            out.set_column(j, &col);
        }
        Ok(out)
    }

    /// Number of gates whose qubits straddle the n/2 cut of a doubled
    /// register. Requires an even register.
    pub fn interaction_gate_count(&self) -> Result<usize> {
        if self.n % 2 != 0 {
            return Err(Error::arg(format!(
                "doubled register must have even width, got {}",
                self.n
            )));
        }
        let cut = self.n / 2;
        Ok(self
            .gates
            .iter()
            .filter(|g| {
                g.qubits.iter().any(|&q| q < cut) && g.qubits.iter().any(|&q| q >= cut)
            })
            .count())
    }
}

/// One Pauli-string term `coeff * P_0 (x) ... (x) P_{n-1}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PauliTerm {
    pub coeff: f64,
    pub pauli: String,
}

impl PauliTerm {
    /// (qubit, axis) pairs for the non-identity tensor factors.
    pub fn support(&self) -> Vec<(usize, char)> {
        self.pauli
            .chars()
            .enumerate()
            .filter(|&(_, ch)| ch != 'I')
            .map(|(i, ch)| (i, ch))
            .collect()
    }
}

/// Real combination of Pauli strings with an evolution time and a
/// first-order product-formula subdivision count.
///
/// The JSON form carries only `t`, `r` and the terms; the register
/// width is read off the string length.
#[derive(Debug, Clone)]
pub struct PauliHamiltonian {
    pub n: usize,
    pub t: f64,
    /// Subdivisions; 0 requests `default_subdivisions`.
    pub r: usize,
    pub terms: Vec<PauliTerm>,
}

#[derive(Serialize, Deserialize)]
struct HamiltonianFile {
    t: f64,
    #[serde(default)]
    r: usize,
    terms: Vec<PauliTerm>,
}

impl Serialize for PauliHamiltonian {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        HamiltonianFile {
            t: self.t,
            r: self.r,
            terms: self.terms.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PauliHamiltonian {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let f = HamiltonianFile::deserialize(d)?;
        let n = f.terms.first().map_or(0, |t| t.pauli.len());
        Ok(PauliHamiltonian {
            n,
            t: f.t,
            r: f.r,
            terms: f.terms,
        })
    }
}

impl PauliHamiltonian {
    pub fn from_json(text: &str) -> Result<Self> {
        let h: PauliHamiltonian = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("hamiltonian JSON: {e}")))?;
        h.validate()?;
        Ok(h)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serialises")
    }

    pub fn validate(&self) -> Result<()> {
        check_qubit_budget(self.n)?;
        if self.n == 0 {
            return Err(Error::arg("hamiltonian needs at least one qubit"));
        }
        if !self.t.is_finite() || self.t < 0.0 {
            return Err(Error::arg(format!("bad evolution time {}", self.t)));
        }
        for term in &self.terms {
            if !term.coeff.is_finite() {
                return Err(Error::arg("non-finite coefficient"));
            }
            if term.pauli.len() != self.n {
                return Err(Error::arg(format!(
                    "pauli string {:?} has length {}, register has {} qubits",
                    term.pauli,
                    term.pauli.len(),
                    self.n
                )));
            }
            if term.pauli.chars().any(|c| !"IXYZ".contains(c)) {
                return Err(Error::Parse(format!("bad pauli string {:?}", term.pauli)));
            }
        }
        Ok(())
    }

    /// Sum of absolute coefficients.
    pub fn one_norm(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.abs()).sum()
    }

    /// Sum of absolute coefficients of terms coupling the two halves of
    /// the register (the n/2 cut). Requires an even register.
    pub fn interaction_one_norm(&self) -> Result<f64> {
        if self.n % 2 != 0 {
            return Err(Error::arg(format!(
                "doubled register must have even width, got {}",
                self.n
            )));
        }
        let cut = self.n / 2;
        Ok(self
            .terms
            .iter()
            .filter(|t| {
                let s = t.support();
                s.iter().any(|&(q, _)| q < cut) && s.iter().any(|&(q, _)| q >= cut)
            })
            .map(|t| t.coeff.abs())
            .sum())
    }

    /// Subdivisions used when `r = 0`: enough that every per-slice angle
    /// is small, r = ceil(100 * |h|_1 * t), at least 1.
    pub fn default_subdivisions(&self) -> usize {
        let r = (100.0 * self.one_norm() * self.t).ceil();
        (r as usize).max(1)
    }

    pub fn subdivisions(&self) -> usize {
        if self.r == 0 {
            self.default_subdivisions()
        } else {
            self.r
        }
    }

    /// Dense Hermitian matrix of the Hamiltonian.
    pub fn matrix(&self) -> Result<CMat> {
        let d = 1usize << self.n;
        let mut out = CMat::zeros(d, d);
        for term in &self.terms {
            let mut m = CMat::identity(1, 1);
            for ch in term.pauli.chars() {
                m = tensor(&m, &pauli(ch)?)?;
            }
            out += m.scale(term.coeff);
        }
        Ok(out)
    }

    /// Dense first-order product formula for e^{-iHt}:
    /// (prod_k e^{-i h_k P_k t/r})^r with terms applied in list order.
    pub fn product_formula_unitary(&self) -> Result<CMat> {
        let d = 1usize << self.n;
        let r = self.subdivisions();
        let dt = self.t / r as f64;
        let mut slice = identity(d);
        for term in &self.terms {
            let mut p = CMat::identity(1, 1);
            for ch in term.pauli.chars() {
                p = tensor(&p, &pauli(ch)?)?;
            }
            let theta = term.coeff * dt;
            // e^{-i theta P} = cos(theta) I - i sin(theta) P for P^2 = I.
            let e = identity(d).scale(theta.cos()) - p.map(|z| z * C64::new(0.0, theta.sin()));
            slice = e * slice;
        }
        let mut out = identity(d);
        for _ in 0..r {
            out = &slice * &out;
        }
        Ok(out)
    }

    /// Dense exact evolution e^{-iHt} by spectral decomposition.
    pub fn exact_unitary(&self) -> Result<CMat> {
        let h = self.matrix()?;
        let eig = nalgebra::SymmetricEigen::new(h);
        let d = eig.eigenvalues.len();
        let mut out = CMat::zeros(d, d);
        for k in 0..d {
            let phase = -eig.eigenvalues[k] * self.t;
            let v = eig.eigenvectors.column(k);
            out += (&v * v.adjoint()).map(|z| z * C64::new(phase.cos(), phase.sin()));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{frobenius_norm, haar_random_unitary, substream};

    #[test]
    fn gate_unitaries_match_hand_values() {
        let s = Gate::one("s", 0).unitary().unwrap();
        assert!((s[(1, 1)] - C64::new(0.0, 1.0)).norm() < 1e-15);
        let t = Gate::one("t", 0).unitary().unwrap();
        assert!((t[(1, 1)] * t[(1, 1)] - s[(1, 1)]).norm() < 1e-15);
        // rx(pi) = -iX.
        let rx = Gate::rotation("rx", 0, std::f64::consts::PI).unitary().unwrap();
        let want = pauli('X').unwrap().map(|z| z * C64::new(0.0, -1.0));
        assert!(frobenius_norm(&(rx - want)) < 1e-12);
        // rz(theta) is diagonal with conjugate phases.
        let rz = Gate::rotation("rz", 0, 0.7).unitary().unwrap();
        assert!((rz[(0, 0)] - rz[(1, 1)].conj()).norm() < 1e-15);
        assert!(rz[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn every_named_gate_is_unitary() {
        for name in ["h", "x", "y", "z", "s", "t"] {
            let u = Gate::one(name, 0).unitary().unwrap();
            assert!(is_unitary(&u, TOL_NORM), "{name}");
        }
        for name in ["rx", "ry", "rz"] {
            let u = Gate::rotation(name, 0, 0.37).unitary().unwrap();
            assert!(is_unitary(&u, TOL_NORM), "{name}");
        }
        for name in ["cnot", "cz", "swap"] {
            let u = Gate::two(name, 0, 1).unitary().unwrap();
            assert!(is_unitary(&u, TOL_NORM), "{name}");
        }
    }

    #[test]
    fn matrix_gate_roundtrips_and_rejects_nonunitary() {
        let mut rng = substream(23, &[0]);
        let u = haar_random_unitary(2, &mut rng).unwrap();
        let g = Gate::from_matrix(vec![0, 1], &u);
        assert!(frobenius_norm(&(g.unitary().unwrap() - &u)) < 1e-15);
        let bad = Gate::from_matrix(vec![0], &identity(2).scale(2.0));
        assert!(matches!(bad.unitary(), Err(Error::NotUnitary(_))));
    }

    #[test]
    fn circuit_apply_matches_dense_unitary() {
        let mut rng = substream(23, &[1]);
        let circ = CircuitIr::new(
            3,
            vec![
                Gate::one("h", 0),
                Gate::two("cnot", 0, 2),
                Gate::rotation("ry", 1, 0.9),
                Gate::two("swap", 1, 2),
                Gate::one("t", 2),
            ],
        )
        .unwrap();
        let u = circ.unitary().unwrap();
        assert!(is_unitary(&u, TOL_NORM));
        let psi = crate::qcore::random_pure_state(3, &mut rng).unwrap();
        let mut v = psi.amplitudes().clone();
        circ.apply(&mut v).unwrap();
        assert!((v - &u * psi.amplitudes()).norm() < 1e-12);
    }

    #[test]
    fn circuit_json_roundtrip_is_stable() {
        let circ = CircuitIr::new(
            2,
            vec![Gate::two("cnot", 0, 1), Gate::rotation("rx", 1, 0.3)],
        )
        .unwrap();
        let text = circ.to_json().unwrap();
        let back = CircuitIr::from_json(&text).unwrap();
        assert_eq!(back.to_json().unwrap(), text);
        let u1 = circ.unitary().unwrap();
        let u2 = back.unitary().unwrap();
        assert!(frobenius_norm(&(u1 - u2)) < 1e-15);
    }

    #[test]
    fn circuit_json_width_is_per_side() {
        // On disk n names one side of the doubled register.
        let circ =
            CircuitIr::from_json(r#"{"n":2,"gates":[{"name":"cnot","qubits":[0,2]}]}"#).unwrap();
        assert_eq!(circ.n, 4);
        assert_eq!(circ.interaction_gate_count().unwrap(), 1);
        let local =
            CircuitIr::from_json(r#"{"n":2,"gates":[{"name":"h","qubits":[1]}]}"#).unwrap();
        assert_eq!(local.interaction_gate_count().unwrap(), 0);
        assert!(circ.to_json().unwrap().contains("\"n\": 2"));
        // Odd widths cannot be written down.
        let odd = CircuitIr::new(3, vec![Gate::one("h", 0)]).unwrap();
        assert!(odd.to_json().is_err());
    }

    #[test]
    fn circuit_validation_catches_errors() {
        assert!(CircuitIr::new(2, vec![Gate::one("q", 0)]).is_err());
        assert!(CircuitIr::new(2, vec![Gate::one("h", 5)]).is_err());
        assert!(CircuitIr::new(2, vec![Gate::two("cnot", 1, 1)]).is_err());
        assert!(CircuitIr::new(2, vec![Gate::rotation("h", 0, 1.0)]).is_err());
        let no_theta = Gate {
            name: "rx".into(),
            qubits: vec![0],
            theta: None,
            matrix: None,
        };
        assert!(CircuitIr::new(2, vec![no_theta]).is_err());
    }

    #[test]
    fn hamiltonian_matrix_and_exact_unitary() {
        let h = PauliHamiltonian {
            n: 2,
            t: 0.8,
            r: 0,
            terms: vec![
                PauliTerm { coeff: 0.5, pauli: "XI".into() },
                PauliTerm { coeff: -0.25, pauli: "ZY".into() },
            ],
        };
        h.validate().unwrap();
        let m = h.matrix().unwrap();
        assert!(frobenius_norm(&(m.adjoint() - &m)) < 1e-14);
        assert!((h.one_norm() - 0.75).abs() < 1e-15);
        let u = h.exact_unitary().unwrap();
        assert!(is_unitary(&u, 1e-9));
        // Single-term Hamiltonian: exact and closed form agree.
        let single = PauliHamiltonian {
            n: 1,
            t: 1.3,
            r: 1,
            terms: vec![PauliTerm { coeff: 0.4, pauli: "Y".into() }],
        };
        let want = identity(2).scale((0.4 * 1.3f64).cos())
            - pauli('Y').unwrap().map(|z| z * C64::new(0.0, (0.4 * 1.3f64).sin()));
        assert!(frobenius_norm(&(single.exact_unitary().unwrap() - &want)) < 1e-12);
        assert!(frobenius_norm(&(single.product_formula_unitary().unwrap() - want)) < 1e-12);
    }

    #[test]
    fn product_formula_converges_to_exact() {
        let mk = |r: usize| PauliHamiltonian {
            n: 2,
            t: 1.0,
            r,
            terms: vec![
                PauliTerm { coeff: 0.7, pauli: "XZ".into() },
                PauliTerm { coeff: 0.3, pauli: "ZX".into() },
                PauliTerm { coeff: -0.2, pauli: "YI".into() },
            ],
        };
        let exact = mk(1).exact_unitary().unwrap();
        let err = |r: usize| frobenius_norm(&(mk(r).product_formula_unitary().unwrap() - &exact));
        // First-order formula: error falls like 1/r.
        let e10 = err(10);
        let e100 = err(100);
        assert!(e100 < e10 / 5.0, "e10 {e10}, e100 {e100}");
        assert!(e100 < 0.02);
        // The r = 0 default is large enough to be accurate here.
        let auto = mk(0);
        assert_eq!(auto.subdivisions(), auto.default_subdivisions());
        assert!(err(auto.subdivisions()) < 1e-2);
    }

    #[test]
    fn hamiltonian_json_rejects_bad_strings() {
        // Width comes from the string length; r is optional.
        let good = r#"{"t":1.0,"terms":[{"coeff":0.5,"pauli":"XZ"}]}"#;
        let h = PauliHamiltonian::from_json(good).unwrap();
        assert_eq!((h.n, h.r), (2, 0));
        let mixed_len =
            r#"{"t":1.0,"terms":[{"coeff":0.5,"pauli":"XZ"},{"coeff":0.1,"pauli":"X"}]}"#;
        assert!(PauliHamiltonian::from_json(mixed_len).is_err());
        let bad_char = r#"{"t":1.0,"r":0,"terms":[{"coeff":0.5,"pauli":"XQ"}]}"#;
        assert!(PauliHamiltonian::from_json(bad_char).is_err());
        let no_terms = r#"{"t":1.0,"terms":[]}"#;
        assert!(PauliHamiltonian::from_json(no_terms).is_err());
        let h2 = PauliHamiltonian::from_json(&h.to_json()).unwrap();
        assert_eq!(h2.n, 2);
    }
}
