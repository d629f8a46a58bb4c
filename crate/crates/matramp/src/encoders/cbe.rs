//! Channel block encodings.
//!
//! A unitary V on the doubled register (upper n qubits = row space,
//! lower n = column space of the matrix picture) compiles into a
//! sequence of mixed-unitary channels that act on the encoding register
//! (one ancilla plus the upper system). Each layer is a convex mixture
//! of operators `diag(K_i, L_i)` that are block diagonal in the
//! ancilla; its effect on the off-diagonal encoding block is
//! `A -> sum_i p_i K_i A L_i^dag`, which in the vector picture equals
//! `eta_layer * O_layer` for the layer's slice of V. Gates confined to
//! one side cost nothing (`eta = 1`); interaction gates pay their
//! canonical weight, and the product of the weights multiplies the
//! encoding's gamma.

use super::canonical::{canonical_coefficients, canonical_gate, kak_decompose};
use super::circuit::{CircuitIr, Gate, PauliHamiltonian};
use super::dmse::DmseEncoding;
use crate::matrixize::{matrixize, vectorize};
use crate::qcore::{
    embed_at, frobenius_norm, identity, is_unitary, pauli, tensor, CMat, CVec, C64,
    DensityMatrix, TOL_NORM,
};
use crate::{Error, Result};

/// Where a layer came from: a small unitary at fixed positions of the
/// doubled register. Gives every layer an independently buildable target.
#[derive(Debug, Clone)]
struct LayerSource {
    matrix: CMat,
    positions: Vec<usize>,
}

/// One mixed-unitary layer in split upper/lower form: terms
/// `(p_i, K_i, L_i)` with K on the upper side and L on the lower side,
/// normalised so `sum_i p_i (K_i (x) conj(L_i)) = eta * O`.
#[derive(Debug, Clone)]
pub struct VecChannel {
    terms: Vec<(f64, CMat, CMat)>,
    eta: f64,
    source: LayerSource,
}

impl VecChannel {
    fn new(terms: Vec<(f64, CMat, CMat)>, eta: f64, source: LayerSource) -> Result<Self> {
        let d = terms
            .first()
            .ok_or_else(|| Error::arg("layer needs at least one term"))?
            .1
            .nrows();
        let mut total = 0.0f64;
        for (p, k, l) in &terms {
            if !(*p > 0.0) {
                return Err(Error::arg("term probabilities must be positive"));
            }
            if k.nrows() != d || l.nrows() != d {
                return Err(Error::dim("layer terms must share a dimension"));
            }
            if !is_unitary(k, TOL_NORM) || !is_unitary(l, TOL_NORM) {
                return Err(Error::NotUnitary("layer term".into()));
            }
            total += p;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::arg(format!("term probabilities sum to {total}")));
        }
        if !(eta > 0.0 && eta <= 1.0 + TOL_NORM) {
            return Err(Error::arg(format!("layer weight eta = {eta} outside (0, 1]")));
        }
        Ok(Self { terms, eta, source })
    }

    pub fn terms(&self) -> &[(f64, CMat, CMat)] {
        &self.terms
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Side dimension 2^n.
    pub fn dim(&self) -> usize {
        self.terms[0].1.nrows()
    }

    /// The doubled-register unitary this layer realises, built from the
    /// source gate rather than from the terms.
    pub fn target(&self, n: usize) -> Result<CMat> {
        embed_at(&self.source.matrix, 2 * n, &self.source.positions)
    }

    /// Residual of `sum_i p_i K_i (x) conj(L_i) - eta * target`.
    pub fn definition_residual(&self, n: usize) -> Result<f64> {
        let d2 = 1usize << (2 * n);
        let mut acc = CMat::zeros(d2, d2);
        for (p, k, l) in &self.terms {
            let lc = l.map(|z| z.conj());
            acc += tensor(k, &lc)?.map(|z| z * C64::new(*p, 0.0));
        }
        let want = self.target(n)?.map(|z| z * C64::new(self.eta, 0.0));
        Ok(frobenius_norm(&(acc - want)))
    }

    /// Exact action of the layer's target on a doubled-register vector,
    /// computed through the split terms: O v = (1/eta) sum_i p_i
    /// vec(K_i M L_i^dag) with M the matrix picture of v.
    pub fn apply_exact(&self, v: &CVec) -> Result<CVec> {
        let m = matrixize(v)?;
        let d = self.dim();
        if m.nrows() != d {
            return Err(Error::dim("vector does not match the layer dimension"));
        }
        let mut acc = CMat::zeros(d, d);
        for (p, k, l) in &self.terms {
            acc += (k * &m * l.adjoint()).map(|z| z * C64::new(*p, 0.0));
        }
        vectorize(&acc.map(|z| z / C64::new(self.eta, 0.0)))
    }

    /// Channel action on the encoding register: rho ->
    /// sum_i p_i diag(K_i, L_i) rho diag(K_i, L_i)^dag, written blockwise.
    pub fn apply_encoding(&self, rho: &CMat) -> Result<CMat> {
        let d = self.dim();
        if rho.nrows() != 2 * d || rho.ncols() != 2 * d {
            return Err(Error::dim("encoding state has the wrong dimension"));
        }
        let block = |r: usize, c: usize| -> CMat {
            CMat::from_fn(d, d, |i, j| rho[(r * d + i, c * d + j)])
        };
        let b00 = block(0, 0);
        let b01 = block(0, 1);
        let b10 = block(1, 0);
        let b11 = block(1, 1);
        let mut o00 = CMat::zeros(d, d);
        let mut o01 = CMat::zeros(d, d);
        let mut o10 = CMat::zeros(d, d);
        let mut o11 = CMat::zeros(d, d);
        for (p, k, l) in &self.terms {
            let w = C64::new(*p, 0.0);
            o00 += (k * &b00 * k.adjoint()).map(|z| z * w);
            o01 += (k * &b01 * l.adjoint()).map(|z| z * w);
            o10 += (l * &b10 * k.adjoint()).map(|z| z * w);
            o11 += (l * &b11 * l.adjoint()).map(|z| z * w);
        }
        let mut out = CMat::zeros(2 * d, 2 * d);
        for i in 0..d {
            for j in 0..d {
                out[(i, j)] = o00[(i, j)];
                out[(i, j + d)] = o01[(i, j)];
                out[(i + d, j)] = o10[(i, j)];
                out[(i + d, j + d)] = o11[(i, j)];
            }
        }
        Ok(out)
    }
}

/// A compiled sequence of channel layers representing a doubled-register
/// unitary. Trotterised inputs store one subdivision's layers plus a
/// repetition count.
#[derive(Debug, Clone)]
pub struct ChannelBlockEncoding {
    n: usize,
    layers: Vec<VecChannel>,
    repetitions: usize,
}

impl ChannelBlockEncoding {
    /// Qubits per side of the doubled register.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn layers(&self) -> &[VecChannel] {
        &self.layers
    }

    pub fn repetitions(&self) -> usize {
        self.repetitions
    }

    /// Product of the layer weights over the whole run.
    pub fn eta_total(&self) -> f64 {
        let slice: f64 = self.layers.iter().map(|l| l.eta()).product();
        slice.powi(self.repetitions as i32)
    }

    /// Exact action of the compiled unitary on a doubled-register vector.
    pub fn apply_exact(&self, v: &CVec) -> Result<CVec> {
        let mut cur = v.clone();
        for _ in 0..self.repetitions {
            for layer in &self.layers {
                cur = layer.apply_exact(&cur)?;
            }
        }
        Ok(cur)
    }

    /// Runs the channel sequence on an encoding, multiplying its weight
    /// by `eta_total`. The off-diagonal block afterwards carries the
    /// evolved matrix at the reduced weight.
    pub fn apply_to_dmse(&self, enc: &DmseEncoding) -> Result<DmseEncoding> {
        if enc.n() != self.n {
            return Err(Error::dim(format!(
                "encoding holds {} system qubits, channels expect {}",
                enc.n(),
                self.n
            )));
        }
        let mut rho = enc.rho().matrix().clone();
        for _ in 0..self.repetitions {
            for layer in &self.layers {
                rho = layer.apply_encoding(&rho)?;
            }
        }
        let rho = (rho.adjoint() + &rho).scale(0.5);
        DmseEncoding::new(DensityMatrix::new(rho)?, enc.gamma() * self.eta_total())
    }

    /// Dense target unitary, the product of every layer target. Meant
    /// for verification at small sizes; cost grows with 4^n per entry
    /// and with the repetition count.
    pub fn target_unitary(&self) -> Result<CMat> {
        let d = 1usize << (2 * self.n);
        let mut slice = identity(d);
        for layer in &self.layers {
            slice = layer.target(self.n)? * slice;
        }
        let mut out = identity(d);
        for _ in 0..self.repetitions {
            out = &slice * &out;
        }
        Ok(out)
    }

    /// Largest per-layer residual against the split-form identity.
    pub fn max_definition_residual(&self) -> Result<f64> {
        let mut worst = 0.0f64;
        for layer in &self.layers {
            worst = worst.max(layer.definition_residual(self.n)?);
        }
        Ok(worst)
    }
}

fn conj_mat(m: &CMat) -> CMat {
    m.map(|z| z.conj())
}

/// Upper-side unitary layer: K = g embedded, L = I.
fn upper_layer(g: &CMat, n: usize, rel: &[usize], positions: Vec<usize>) -> Result<VecChannel> {
    let k = embed_at(g, n, rel)?;
    VecChannel::new(
        vec![(1.0, k, identity(1 << n))],
        1.0,
        LayerSource {
            matrix: g.clone(),
            positions,
        },
    )
}

/// Lower-side unitary layer: K = I, L = conj(g embedded).
fn lower_layer(g: &CMat, n: usize, rel: &[usize], positions: Vec<usize>) -> Result<VecChannel> {
    let l = conj_mat(&embed_at(g, n, rel)?);
    VecChannel::new(
        vec![(1.0, identity(1 << n), l)],
        1.0,
        LayerSource {
            matrix: g.clone(),
            positions,
        },
    )
}

/// Local pair layer: hi on upper qubit `us`, lo on lower qubit `ls`.
fn local_pair_layer(hi: &CMat, lo: &CMat, n: usize, us: usize, ls: usize) -> Result<VecChannel> {
    let k = embed_at(hi, n, &[us])?;
    let l = conj_mat(&embed_at(lo, n, &[ls])?);
    VecChannel::new(
        vec![(1.0, k, l)],
        1.0,
        LayerSource {
            matrix: tensor(hi, lo)?,
            positions: vec![us, n + ls],
        },
    )
}

/// Canonical-interaction layer between upper qubit `us` and lower qubit
/// `ls`: the Pauli-pair mixture at weight `eta = 1 / sum_c |g_c|`.
fn canonical_layer(theta: [f64; 3], n: usize, us: usize, ls: usize) -> Result<VecChannel> {
    let coeffs = canonical_coefficients(theta);
    let ssum: f64 = coeffs.iter().map(|g| g.norm()).sum();
    let mut terms = Vec::new();
    let mut kept = 0.0f64;
    for (g, c) in coeffs.iter().zip(['I', 'X', 'Y', 'Z']) {
        let s = g.norm();
        if s < 1e-14 {
            continue;
        }
        kept += s / ssum;
        let phase = g / C64::new(s, 0.0);
        let k = embed_at(&pauli(c)?, n, &[us])?.map(|z| z * phase);
        let l = conj_mat(&embed_at(&pauli(c)?, n, &[ls])?);
        terms.push((s / ssum, k, l));
    }
    // Dropped terms carry at most 1e-14 each; renormalise the rest.
    for t in &mut terms {
        t.0 /= kept;
    }
    VecChannel::new(
        terms,
        1.0 / ssum,
        LayerSource {
            matrix: canonical_gate(theta),
            positions: vec![us, n + ls],
        },
    )
}

/// Compiles a doubled-register circuit into channel layers. Gates on one
/// side become free unitary layers; gates across the cut decompose into
/// local layers plus a canonical mixture that pays its interaction
/// weight.
pub fn compile_circuit_cbe(circ: &CircuitIr) -> Result<ChannelBlockEncoding> {
    circ.validate()?;
    if circ.n % 2 != 0 {
        return Err(Error::arg(format!(
            "doubled register must have even width, got {}",
            circ.n
        )));
    }
    let n = circ.n / 2;
    let mut layers = Vec::new();
    for gate in &circ.gates {
        layers.extend(compile_gate(gate, n)?);
    }
    Ok(ChannelBlockEncoding {
        n,
        layers,
        repetitions: 1,
    })
}

fn compile_gate(gate: &Gate, n: usize) -> Result<Vec<VecChannel>> {
    let u = gate.unitary()?;
    let qs = &gate.qubits;
    let uppers = qs.iter().filter(|&&q| q < n).count();
    if uppers == qs.len() {
        return Ok(vec![upper_layer(&u, n, qs, qs.clone())?]);
    }
    if uppers == 0 {
        let rel: Vec<usize> = qs.iter().map(|&q| q - n).collect();
        return Ok(vec![lower_layer(&u, n, &rel, qs.clone())?]);
    }
    // One qubit on each side: orient so the upper qubit is the more
    // significant bit of the 4x4, then split through the canonical form.
    let (us, ls, g) = if qs[0] < n {
        (qs[0], qs[1] - n, u)
    } else {
        let swap = Gate::two("swap", 0, 1).unitary()?;
        (qs[1], qs[0] - n, &swap * u * &swap)
    };
    let kak = kak_decompose(&g)?;
    let pre_hi = kak.pre.0.map(|z| z * kak.phase);
    Ok(vec![
        local_pair_layer(&pre_hi, &kak.pre.1, n, us, ls)?,
        canonical_layer(kak.theta, n, us, ls)?,
        local_pair_layer(&kak.post.0, &kak.post.1, n, us, ls)?,
    ])
}

/// Compiles a first-order product formula for `exp(-i H t)` on the
/// doubled register into channel layers: one subdivision's term list,
/// repeated. Terms within one side are free; terms coupling the sides
/// become two-point mixtures with weight `1 / (cos + sin)` of the slice
/// angle, so the subdivision count must keep every slice angle under
/// pi/2.
pub fn compile_trotter_cbe(h: &PauliHamiltonian) -> Result<ChannelBlockEncoding> {
    h.validate()?;
    if h.n % 2 != 0 {
        return Err(Error::arg(format!(
            "doubled register must have even width, got {}",
            h.n
        )));
    }
    let n = h.n / 2;
    let r = h.subdivisions();
    let dt = h.t / r as f64;
    let mut layers = Vec::new();
    for term in &h.terms {
        let theta = term.coeff * dt;
        if theta == 0.0 {
            continue;
        }
        let support = term.support();
        let us: Vec<(usize, char)> = support.iter().copied().filter(|&(q, _)| q < n).collect();
        let ls: Vec<(usize, char)> = support
            .iter()
            .copied()
            .filter(|&(q, _)| q >= n)
            .map(|(q, c)| (q - n, c))
            .collect();
        let pauli_string = |axes: &[(usize, char)]| -> Result<CMat> {
            let mut m = CMat::identity(1, 1);
            for &(_, c) in axes {
                m = tensor(&m, &pauli(c)?)?;
            }
            Ok(m)
        };
        let positions: Vec<usize> = support.iter().map(|&(q, _)| q).collect();
        if support.is_empty() {
            // Identity term: a pure phase riding on the upper side.
            let ph = C64::new(theta.cos(), -theta.sin());
            let scalar = CMat::from_row_slice(1, 1, &[ph]);
            layers.push(VecChannel::new(
                vec![(1.0, identity(1 << n).map(|z| z * ph), identity(1 << n))],
                1.0,
                LayerSource {
                    matrix: scalar,
                    positions: vec![],
                },
            )?);
            continue;
        }
        let p_full = pauli_string(&support)?;
        let exp_full = identity(p_full.nrows()).scale(theta.cos())
            - p_full.map(|z| z * C64::new(0.0, theta.sin()));
        if ls.is_empty() {
            let rel: Vec<usize> = us.iter().map(|&(q, _)| q).collect();
            layers.push(upper_layer(&exp_full, n, &rel, positions)?);
            continue;
        }
        if us.is_empty() {
            let rel: Vec<usize> = ls.iter().map(|&(q, _)| q).collect();
            layers.push(lower_layer(&exp_full, n, &rel, positions)?);
            continue;
        }
        // Interaction term: exp(-i theta P_u (x) P_l) mixes the identity
        // with the signed Pauli pair.
        let ta = theta.abs();
        let sign = theta.signum();
        if ta >= std::f64::consts::FRAC_PI_2 {
            return Err(Error::arg(format!(
                "slice angle {ta:.4} of term {:?} reaches pi/2; raise the subdivision count",
                term.pauli
            )));
        }
        let (c, s) = (ta.cos(), ta.sin());
        let eta = 1.0 / (c + s);
        let us_rel: Vec<usize> = us.iter().map(|&(q, _)| q).collect();
        let ls_rel: Vec<usize> = ls.iter().map(|&(q, _)| q).collect();
        let k_pauli = embed_at(&pauli_string(&us)?, n, &us_rel)?;
        let l_pauli = conj_mat(&embed_at(&pauli_string(&ls)?, n, &ls_rel)?);
        let d = 1usize << n;
        let mut terms = vec![(c * eta, identity(d), identity(d))];
        terms.push((
            s * eta,
            k_pauli.map(|z| z * C64::new(0.0, -sign)),
            l_pauli,
        ));
        layers.push(VecChannel::new(
            terms,
            eta,
            LayerSource {
                matrix: exp_full,
                positions,
            },
        )?);
    }
    Ok(ChannelBlockEncoding {
        n,
        layers,
        repetitions: r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoders::circuit::PauliTerm;
    use crate::encoders::dmse::dmse_optimal;
    use crate::qcore::{random_pure_state, substream};

    fn random_doubled_vec(n: usize, rng: &mut crate::qcore::RngStream) -> CVec {
        random_pure_state(2 * n, rng).unwrap().into_amplitudes()
    }

    #[test]
    fn cnot_across_the_cut() {
        let circ = CircuitIr::new(2, vec![Gate::two("cnot", 0, 1)]).unwrap();
        let cbe = compile_circuit_cbe(&circ).unwrap();
        assert_eq!(cbe.layers().len(), 3);
        assert!((cbe.eta_total() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-10);
        assert!(cbe.max_definition_residual().unwrap() < 1e-9);
        let mut rng = substream(41, &[0]);
        let v = random_doubled_vec(1, &mut rng);
        let got = cbe.apply_exact(&v).unwrap();
        let want = circ.unitary().unwrap() * &v;
        assert!((got - want).norm() < 1e-9);
        let tgt = cbe.target_unitary().unwrap();
        assert!(frobenius_norm(&(tgt - circ.unitary().unwrap())) < 1e-9);
    }

    #[test]
    fn orientation_swap_handles_lower_control() {
        // Control on the lower side, target on the upper side.
        let circ = CircuitIr::new(2, vec![Gate::two("cnot", 1, 0)]).unwrap();
        let cbe = compile_circuit_cbe(&circ).unwrap();
        assert!((cbe.eta_total() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-10);
        let mut rng = substream(41, &[1]);
        let v = random_doubled_vec(1, &mut rng);
        let got = cbe.apply_exact(&v).unwrap();
        let want = circ.unitary().unwrap() * &v;
        assert!((got - want).norm() < 1e-9);
    }

    #[test]
    fn one_sided_gates_are_free() {
        let circ = CircuitIr::new(
            4,
            vec![
                Gate::one("h", 0),
                Gate::two("cnot", 0, 1),
                Gate::one("t", 2),
                Gate::two("cz", 2, 3),
                Gate::rotation("rz", 3, 0.4),
            ],
        )
        .unwrap();
        let cbe = compile_circuit_cbe(&circ).unwrap();
        assert!((cbe.eta_total() - 1.0).abs() < 1e-12);
        assert!(cbe.max_definition_residual().unwrap() < 1e-10);
        let mut rng = substream(41, &[2]);
        let v = random_doubled_vec(2, &mut rng);
        let got = cbe.apply_exact(&v).unwrap();
        let want = circ.unitary().unwrap() * &v;
        assert!((got - want).norm() < 1e-9);
    }

    #[test]
    fn mixed_circuit_matches_unitary_and_weights() {
        // Two interaction gates: eta multiplies.
        let circ = CircuitIr::new(
            4,
            vec![
                Gate::one("h", 0),
                Gate::two("cnot", 0, 2),
                Gate::rotation("ry", 3, 0.7),
                Gate::two("swap", 1, 3),
            ],
        )
        .unwrap();
        let cbe = compile_circuit_cbe(&circ).unwrap();
        let want_eta = std::f64::consts::FRAC_1_SQRT_2 * 0.5;
        assert!((cbe.eta_total() - want_eta).abs() < 1e-9);
        assert!(cbe.max_definition_residual().unwrap() < 1e-9);
        let mut rng = substream(41, &[3]);
        let v = random_doubled_vec(2, &mut rng);
        let got = cbe.apply_exact(&v).unwrap();
        let want = circ.unitary().unwrap() * &v;
        assert!((got - want).norm() < 1e-9);
    }

    #[test]
    fn encoding_evolution_carries_the_weight() {
        let mut rng = substream(41, &[4]);
        let a = matrixize(random_pure_state(2, &mut rng).unwrap().amplitudes()).unwrap();
        let enc = dmse_optimal(&a).unwrap();
        let circ = CircuitIr::new(
            2,
            vec![Gate::one("h", 0), Gate::two("cnot", 0, 1), Gate::one("s", 1)],
        )
        .unwrap();
        let cbe = compile_circuit_cbe(&circ).unwrap();
        let evolved = cbe.apply_to_dmse(&enc).unwrap();
        assert!((evolved.gamma() - enc.gamma() * cbe.eta_total()).abs() < 1e-12);
        // Off-diagonal block equals gamma' times the evolved matrix.
        let v = vectorize(&a).unwrap();
        let want_mat = matrixize(&(circ.unitary().unwrap() * v)).unwrap();
        let resid = frobenius_norm(&(evolved.block(0, 1) - want_mat.scale(evolved.gamma())));
        assert!(resid < 1e-9, "block residual {resid}");
        // gamma_exact agrees because the evolved matrix stays normalised.
        assert!((evolved.gamma_exact() - evolved.gamma()).abs() < 1e-9);
    }

    #[test]
    fn trotter_layers_match_product_formula() {
        let h = PauliHamiltonian {
            n: 2,
            t: 0.6,
            r: 50,
            terms: vec![
                PauliTerm { coeff: 0.8, pauli: "XZ".into() },
                PauliTerm { coeff: -0.3, pauli: "XI".into() },
                PauliTerm { coeff: 0.5, pauli: "IY".into() },
            ],
        };
        let cbe = compile_trotter_cbe(&h).unwrap();
        assert_eq!(cbe.repetitions(), 50);
        assert_eq!(cbe.layers().len(), 3);
        assert!(cbe.max_definition_residual().unwrap() < 1e-10);
        // The channel route reproduces the product formula to round-off,
        // not merely to the Trotter error.
        let mut rng = substream(41, &[5]);
        let v = random_doubled_vec(1, &mut rng);
        let got = cbe.apply_exact(&v).unwrap();
        let pf = h.product_formula_unitary().unwrap();
        assert!((&got - &pf * &v).norm() < 1e-10);
        // And is close to the exact evolution at the Trotter level.
        let exact = h.exact_unitary().unwrap();
        assert!((got - exact * &v).norm() < 0.05);
        // Weight: one interaction term contributes per slice.
        let ta: f64 = 0.8 * 0.6 / 50.0;
        let eta_slice = 1.0 / (ta.cos() + ta.sin());
        assert!((cbe.eta_total() - eta_slice.powi(50)).abs() < 1e-12);
    }

    #[test]
    fn trotter_identity_term_is_a_phase() {
        let h = PauliHamiltonian {
            n: 2,
            t: 1.0,
            r: 4,
            terms: vec![
                PauliTerm { coeff: 0.9, pauli: "II".into() },
                PauliTerm { coeff: 0.2, pauli: "XX".into() },
            ],
        };
        let cbe = compile_trotter_cbe(&h).unwrap();
        assert!(cbe.max_definition_residual().unwrap() < 1e-10);
        let mut rng = substream(41, &[6]);
        let v = random_doubled_vec(1, &mut rng);
        let got = cbe.apply_exact(&v).unwrap();
        let want = h.product_formula_unitary().unwrap() * &v;
        assert!((got - want).norm() < 1e-10);
    }

    #[test]
    fn trotter_rejects_oversized_slice_angles() {
        let h = PauliHamiltonian {
            n: 2,
            t: 2.0,
            r: 1,
            terms: vec![PauliTerm { coeff: 1.0, pauli: "XY".into() }],
        };
        assert!(compile_trotter_cbe(&h).is_err());
        // The default subdivision count keeps angles tiny.
        let auto = PauliHamiltonian { r: 0, ..h };
        assert!(compile_trotter_cbe(&auto).is_ok());
    }

    #[test]
    fn odd_registers_are_rejected() {
        let circ = CircuitIr::new(3, vec![Gate::one("h", 0)]).unwrap();
        assert!(compile_circuit_cbe(&circ).is_err());
        let h = PauliHamiltonian {
            n: 3,
            t: 0.1,
            r: 1,
            terms: vec![PauliTerm { coeff: 0.1, pauli: "XII".into() }],
        };
        assert!(compile_trotter_cbe(&h).is_err());
    }
}
