//! Composite operators behind the estimators and their exact oracles.
//!
//! Register layouts, most significant qubit first:
//!   single-test operator W / U1: (2 selector, 1 flag, n system, k block ancillas)
//!   amplitude-estimation operator U2: (1 test, m purification, 2 selector, 1 flag, n, k)
//!
//! The selector pair drives a four-term sum that sandwiches the
//! block-encoding unitary and its inverse; the flag qubit is the
//! encoding register's ancilla. Dense builders exist for verification
//! at small sizes; estimation itself only ever touches the closed-form
//! expectation values and, for geometry checks, a matrix-free vector
//! path.

use super::Part;
use crate::encoders::{DmseEncoding, UbseEncoding};
use crate::qcore::{
    apply_matrix_on_trailing, apply_one_qubit, check_qubit_budget, identity, inner_product,
    pauli, purify_ancilla_first, tensor, CMat, CVec, C64,
};
use crate::{Error, Result};

/// Selector slot data: coefficient per part, flag-qubit Pauli, and
/// whether the slot carries the inverse of the block unitary.
const SLOT_SIGMA: [char; 4] = ['X', 'Y', 'X', 'Y'];
const SLOT_DAGGER: [bool; 4] = [false, false, true, true];

fn slot_coeffs(part: Part) -> [C64; 4] {
    let i = C64::new(0.0, 1.0);
    let one = C64::new(1.0, 0.0);
    match part {
        Part::Real => [one, i, one, -i],
        Part::Imag => [i, -one, -i, -one],
    }
}

fn hadamard() -> CMat {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    CMat::from_row_slice(
        2,
        2,
        &[
            C64::new(h, 0.0),
            C64::new(h, 0.0),
            C64::new(h, 0.0),
            C64::new(-h, 0.0),
        ],
    )
}

/// Four-term selected operator on 3 + n + k qubits: slot ab applies its
/// coefficient times (Pauli on the flag) times (block unitary or its
/// inverse on the trailing n + k).
pub fn build_w(u: &UbseEncoding, part: Part) -> Result<CMat> {
    let nk = u.n() + u.k();
    check_qubit_budget(3 + nk)?;
    let sub = 1usize << (1 + nk);
    let coeffs = slot_coeffs(part);
    let mut w = CMat::zeros(4 * sub, 4 * sub);
    for ab in 0..4 {
        let op = if SLOT_DAGGER[ab] {
            u.unitary().adjoint()
        } else {
            u.unitary().clone()
        };
        let block = tensor(&pauli(SLOT_SIGMA[ab])?, &op)?.map(|z| z * coeffs[ab]);
        for r in 0..sub {
            for c in 0..sub {
                w[(ab * sub + r, ab * sub + c)] = block[(r, c)];
            }
        }
    }
    Ok(w)
}

/// Selector-basis-rotated operator: Hadamards on the selector pair
/// around `build_w`. Its upper-left selector block carries the encoded
/// matrix scaled by lambda/2 on the flag's off-diagonal.
pub fn build_u1(u: &UbseEncoding, part: Part) -> Result<CMat> {
    let w = build_w(u, part)?;
    let rest = 1usize << (1 + u.n() + u.k());
    let wrap = tensor(&tensor(&hadamard(), &hadamard())?, &identity(rest))?;
    Ok(&wrap * w * &wrap)
}

/// Controlled variant for amplitude estimation on
/// 1 + m + 3 + n + k qubits: identity on the test qubit's zero branch,
/// the rotated operator (with m idle purification qubits) on the one
/// branch, wrapped in Hadamards on the test qubit.
pub fn build_u2(u: &UbseEncoding, m: usize, part: Part) -> Result<CMat> {
    let inner_qubits = m + 3 + u.n() + u.k();
    check_qubit_budget(1 + inner_qubits)?;
    let u1 = build_u1(u, part)?;
    let inner = tensor(&identity(1 << m), &u1)?;
    let half = 1usize << inner_qubits;
    let mut v = CMat::zeros(2 * half, 2 * half);
    for i in 0..half {
        v[(i, i)] = C64::new(1.0, 0.0);
        for j in 0..half {
            v[(half + i, half + j)] = inner[(i, j)];
        }
    }
    let wrap = tensor(&hadamard(), &identity(half))?;
    Ok(&wrap * v * &wrap)
}

/// Exact single-test expectation gamma*lambda*mu_part, evaluated by
/// contracting the encoding blocks: the selector sum collapses to
/// (Tr(P rho10) + Tr(P' rho01))/2 with P the scaled block.
pub fn exact_sql_expectation(u: &UbseEncoding, enc: &DmseEncoding, part: Part) -> Result<f64> {
    if u.n() != enc.n() {
        return Err(Error::dim(format!(
            "encodings disagree on the system size: {} vs {}",
            u.n(),
            enc.n()
        )));
    }
    let p = u.block();
    let t_up = (&p * enc.block(1, 0)).trace();
    let t_dn = (p.adjoint() * enc.block(0, 1)).trace();
    let i = C64::new(0.0, 1.0);
    let v = match part {
        Part::Real => (t_up + t_dn) * C64::new(0.5, 0.0),
        Part::Imag => (t_up * i - t_dn * i) * C64::new(0.5, 0.0),
    };
    Ok(v.re)
}

/// Same expectation through the dense route:
/// Tr(U1 |00><00| (x) rho (x) |0><0|_k). Verification only.
pub fn exact_sql_expectation_dense(
    u: &UbseEncoding,
    enc: &DmseEncoding,
    part: Part,
) -> Result<f64> {
    let u1 = build_u1(u, part)?;
    let sel = CMat::from_fn(4, 4, |i, j| {
        C64::new(if i == 0 && j == 0 { 1.0 } else { 0.0 }, 0.0)
    });
    let kd = 1usize << u.k();
    let anc = CMat::from_fn(kd, kd, |i, j| {
        C64::new(if i == 0 && j == 0 { 1.0 } else { 0.0 }, 0.0)
    });
    let state = tensor(&tensor(&sel, enc.rho().matrix())?, &anc)?;
    Ok((u1 * state).trace().re)
}

/// Exact amplitude-estimation target a = |(1 + gamma*lambda*mu)/2|.
pub fn exact_hl_amplitude(u: &UbseEncoding, enc: &DmseEncoding, part: Part) -> Result<f64> {
    let v = exact_sql_expectation(u, enc, part)?;
    Ok((0.5 * (1.0 + v)).abs())
}

/// Initial state for amplitude estimation: test and selector qubits at
/// zero, the encoding purified with its ancillas leading, block
/// ancillas at zero. Returns the statevector and the purification
/// width m.
pub fn hl_initial_state(u: &UbseEncoding, enc: &DmseEncoding) -> Result<(CVec, usize)> {
    if u.n() != enc.n() {
        return Err(Error::dim("encodings disagree on the system size"));
    }
    let (sa, m) = purify_ancilla_first(enc.rho())?;
    let n = enc.n();
    let k = u.k();
    let q = 1 + m + 2 + 1 + n + k;
    check_qubit_budget(q)?;
    let sys = 1usize << (1 + n);
    let kd = 1usize << k;
    let mut init = CVec::zeros(1 << q);
    let amps = sa.amplitudes();
    for i in 0..1usize << m {
        for x in 0..sys {
            init[((i * 4) * sys + x) * kd] = amps[i * sys + x];
        }
    }
    Ok((init, m))
}

/// Dense cross-check of the amplitude: |<init| U2 |init>|.
pub fn exact_hl_amplitude_dense(u: &UbseEncoding, enc: &DmseEncoding, part: Part) -> Result<f64> {
    let (init, m) = hl_initial_state(u, enc)?;
    let u2 = build_u2(u, m, part)?;
    Ok(inner_product(&init, &(u2 * &init)).norm())
}

/// Applies U2 to a statevector without materialising it: Hadamard on
/// the test qubit, then the rotated selector sum on each purification
/// block of the test-one half, then Hadamard again.
pub fn apply_u2_state(u: &UbseEncoding, m: usize, part: Part, state: &mut CVec) -> Result<()> {
    let n = u.n();
    let k = u.k();
    let q = 1 + m + 2 + 1 + n + k;
    if state.len() != 1 << q {
        return Err(Error::dim(format!(
            "state length {} does not match {} qubits",
            state.len(),
            q
        )));
    }
    let h = hadamard();
    apply_one_qubit(state, q, 0, &h)?;
    let half = 1usize << (q - 1);
    let sub_q = 3 + n + k;
    let sub_len = 1usize << sub_q;
    let coeffs = slot_coeffs(part);
    let ub_adj = u.unitary().adjoint();
    for blk in 0..1usize << m {
        let offset = half + blk * sub_len;
        let mut sub = CVec::from_fn(sub_len, |i, _| state[offset + i]);
        apply_one_qubit(&mut sub, sub_q, 0, &h)?;
        apply_one_qubit(&mut sub, sub_q, 1, &h)?;
        let slot_len = 1usize << (1 + n + k);
        for ab in 0..4 {
            let mut slot = CVec::from_fn(slot_len, |i, _| sub[ab * slot_len + i]);
            slot *= coeffs[ab];
            apply_one_qubit(&mut slot, 1 + n + k, 0, &pauli(SLOT_SIGMA[ab])?)?;
            let op = if SLOT_DAGGER[ab] { &ub_adj } else { u.unitary() };
            apply_matrix_on_trailing(&mut slot, 1 + n + k, op)?;
            for i in 0..slot_len {
                sub[ab * slot_len + i] = slot[i];
            }
        }
        apply_one_qubit(&mut sub, sub_q, 0, &h)?;
        apply_one_qubit(&mut sub, sub_q, 1, &h)?;
        for i in 0..sub_len {
            state[offset + i] = sub[i];
        }
    }
    apply_one_qubit(state, q, 0, &h)?;
    Ok(())
}

/// One search-operator step without matrices: reflect about the initial
/// state, reflect about its image w, negate.
pub fn grover_apply(psi: &CVec, w: &CVec, x: &CVec) -> CVec {
    let two = C64::new(2.0, 0.0);
    let y = x - psi * (inner_product(psi, x) * two);
    let z = &y - w * (inner_product(w, &y) * two);
    -z
}

/// Dense search operator -(I - 2ww^dag)(I - 2 psi psi^dag) with
/// w = U2 psi. Verification scale only.
pub fn grover_operator(psi: &CVec, w: &CVec) -> Result<CMat> {
    let d = psi.len();
    if w.len() != d {
        return Err(Error::dim("state lengths differ"));
    }
    check_qubit_budget(crate::qcore::qubits_for_dim(d)?)?;
    let two = C64::new(2.0, 0.0);
    let r_psi = identity(d) - (psi * psi.adjoint()).map(|z| z * two);
    let r_w = identity(d) - (w * w.adjoint()).map(|z| z * two);
    Ok(-(r_w * r_psi))
}
