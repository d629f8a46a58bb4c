//! In-place statevector kernels. Qubit 0 is the most significant bit of
//! the basis index, so qubit t of a q-qubit register has stride
//! 2^(q-1-t).

use super::matrix::{CMat, CVec, C64};
use crate::{Error, Result};

/// |index> on `qubits` qubits as a raw amplitude vector.
pub fn basis_state(qubits: usize, index: usize) -> CVec {
    let mut v = CVec::zeros(1usize << qubits);
    v[index] = C64::new(1.0, 0.0);
    v
}

/// <a|b>.
pub fn inner_product(a: &CVec, b: &CVec) -> C64 {
    a.dotc(b)
}

fn check_register(state: &CVec, qubits: usize) -> Result<()> {
    if state.len() != 1usize << qubits {
        return Err(Error::dim(format!(
            "state length {} does not match {qubits} qubits",
            state.len()
        )));
    }
    Ok(())
}

/// Applies a 2x2 gate to one qubit in place.
pub fn apply_one_qubit(state: &mut CVec, qubits: usize, target: usize, g: &CMat) -> Result<()> {
    check_register(state, qubits)?;
    if target >= qubits {
        return Err(Error::arg(format!("target {target} out of range")));
    }
    if g.nrows() != 2 || g.ncols() != 2 {
        return Err(Error::dim("one-qubit gate must be 2x2"));
    }
    let stride = 1usize << (qubits - 1 - target);
    let dim = state.len();
    let mut base = 0usize;
    while base < dim {
        for off in 0..stride {
            let i0 = base + off;
            let i1 = i0 + stride;
            let a0 = state[i0];
            let a1 = state[i1];
            state[i0] = g[(0, 0)] * a0 + g[(0, 1)] * a1;
            state[i1] = g[(1, 0)] * a0 + g[(1, 1)] * a1;
        }
        base += stride << 1;
    }
    Ok(())
}

/// Applies a 4x4 gate to qubits (t1, t2) in place; t1 indexes the more
/// significant bit of the gate's 2-bit basis.
pub fn apply_two_qubit(
    state: &mut CVec,
    qubits: usize,
    t1: usize,
    t2: usize,
    g: &CMat,
) -> Result<()> {
    check_register(state, qubits)?;
    if t1 >= qubits || t2 >= qubits || t1 == t2 {
        return Err(Error::arg(format!("bad target pair ({t1}, {t2})")));
    }
    if g.nrows() != 4 || g.ncols() != 4 {
        return Err(Error::dim("two-qubit gate must be 4x4"));
    }
    let s1 = 1usize << (qubits - 1 - t1);
    let s2 = 1usize << (qubits - 1 - t2);
    let dim = state.len();
    let mut amps = [C64::new(0.0, 0.0); 4];
    for i in 0..dim {
        // Visit each 4-tuple once, from its (b1, b2) = (0, 0) member.
        if i & s1 != 0 || i & s2 != 0 {
            continue;
        }
        let idx = [i, i + s2, i + s1, i + s1 + s2];
        for k in 0..4 {
            amps[k] = state[idx[k]];
        }
        for r in 0..4 {
            let mut acc = C64::new(0.0, 0.0);
            for c in 0..4 {
                acc += g[(r, c)] * amps[c];
            }
            state[idx[r]] = acc;
        }
    }
    Ok(())
}

/// Applies a 2^k x 2^k matrix to the trailing k qubits in place. The
/// reshape is free because trailing qubits are least significant: each
/// consecutive block of 2^k amplitudes is one column vector.
pub fn apply_matrix_on_trailing(state: &mut CVec, qubits: usize, m: &CMat) -> Result<()> {
    check_register(state, qubits)?;
    let sub = m.nrows();
    if m.ncols() != sub || !sub.is_power_of_two() || sub > state.len() {
        return Err(Error::dim(format!(
            "trailing operator shape {}x{} does not fit a {qubits}-qubit register",
            m.nrows(),
            m.ncols()
        )));
    }
    let groups = state.len() / sub;
    let mut scratch = vec![C64::new(0.0, 0.0); sub];
    for gidx in 0..groups {
        let base = gidx * sub;
        for r in 0..sub {
            let mut acc = C64::new(0.0, 0.0);
            for c in 0..sub {
                acc += m[(r, c)] * state[base + c];
            }
            scratch[r] = acc;
        }
        for (r, v) in scratch.iter().enumerate() {
            state[base + r] = *v;
        }
    }
    Ok(())
}

/// Reorders qubits so the block [start, start+len) becomes the leading
/// register; all other qubits keep their relative order after it.
pub fn move_block_to_front(state: &CVec, qubits: usize, start: usize, len: usize) -> Result<CVec> {
    check_register(state, qubits)?;
    if len == 0 || start + len > qubits {
        return Err(Error::arg(format!(
            "block [{start}, {}) out of range for {qubits} qubits",
            start + len
        )));
    }
    if start == 0 {
        return Ok(state.clone());
    }
    // new_order[new_pos] = old_pos
    let mut new_order: Vec<usize> = (start..start + len).collect();
    new_order.extend((0..qubits).filter(|p| *p < start || *p >= start + len));
    let mut out = CVec::zeros(state.len());
    for old_idx in 0..state.len() {
        let mut new_idx = 0usize;
        for (new_pos, &old_pos) in new_order.iter().enumerate() {
            let bit = (old_idx >> (qubits - 1 - old_pos)) & 1;
            new_idx |= bit << (qubits - 1 - new_pos);
        }
        out[new_idx] = state[old_idx];
    }
    Ok(out)
}
