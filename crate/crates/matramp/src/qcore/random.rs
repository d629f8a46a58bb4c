//! Seeded randomness: deterministic substreams plus Haar-distributed
//! unitaries, states, densities, and channels.

use super::channel::KrausChannel;
use super::matrix::{CMat, CVec, C64};
use super::state::{DensityMatrix, PureState};
use super::{check_qubit_budget, TOL_RANK};
use crate::Result;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

/// The stream type handed to every sampling routine.
pub type RngStream = ChaCha12Rng;

/// Splitmix64 finaliser; good avalanche for id folding.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives an independent stream from a root seed and a path of ids.
/// `substream(s, &[a, b])` and `substream(s, &[a, c])` never collide in
/// practice, which makes parallel sampling reproducible regardless of
/// scheduling order.
pub fn substream(seed: u64, path: &[u64]) -> RngStream {
    let mut acc = mix64(seed ^ 0x51a5_e1f8_a3b7_29d4);
    for &id in path {
        acc = mix64(acc ^ mix64(id));
    }
    let mut key = [0u8; 32];
    let mut word = acc;
    for chunk in key.chunks_mut(8) {
        word = mix64(word);
        chunk.copy_from_slice(&word.to_le_bytes());
    }
    ChaCha12Rng::from_seed(key)
}

fn standard_complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im)
}

/// Ginibre matrix with i.i.d. standard complex Gaussian entries.
fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    CMat::from_fn(rows, cols, |_, _| standard_complex(rng))
}

/// Haar-random unitary on `qubits` qubits via QR of a Ginibre matrix with
/// the phase convention fixed so R has a positive real diagonal.
pub fn haar_random_unitary<R: Rng + ?Sized>(qubits: usize, rng: &mut R) -> Result<CMat> {
    check_qubit_budget(qubits)?;
    let d = 1usize << qubits;
    let g = ginibre(d, d, rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..d {
        let rjj = r[(j, j)];
        let mag = rjj.norm();
        // A zero diagonal has probability zero; keep the column as-is then.
        if mag > TOL_RANK {
            let phase = rjj / C64::new(mag, 0.0);
            for i in 0..d {
                q[(i, j)] *= phase;
            }
        }
    }
    Ok(q)
}

/// Haar-random pure state (first column of a Haar unitary, equivalently a
/// normalised Gaussian vector).
pub fn random_pure_state<R: Rng + ?Sized>(qubits: usize, rng: &mut R) -> Result<PureState> {
    check_qubit_budget(qubits)?;
    let d = 1usize << qubits;
    let v = CVec::from_fn(d, |_, _| standard_complex(rng));
    PureState::normalized(v)
}

/// Full-rank random density matrix: G G^dag / Tr(G G^dag) with a square
/// Ginibre G (Hilbert-Schmidt ensemble).
pub fn random_density_matrix<R: Rng + ?Sized>(qubits: usize, rng: &mut R) -> Result<DensityMatrix> {
    check_qubit_budget(qubits)?;
    let d = 1usize << qubits;
    let g = ginibre(d, d, rng);
    let mut rho = &g * g.adjoint();
    let tr = rho.trace().re;
    rho /= C64::new(tr, 0.0);
    // Symmetrise away the floating-point skew before validation.
    let rho = (rho.adjoint() + &rho).scale(0.5);
    DensityMatrix::new(rho)
}

/// Random channel with `kraus_count` operators via Stinespring dilation:
/// take a Haar unitary on system + environment, fix the environment input
/// to |0>, and read off the Kraus blocks K_e = (<e| (x) I) U (|0> (x) I).
pub fn random_kraus_channel<R: Rng + ?Sized>(
    qubits: usize,
    kraus_count: usize,
    rng: &mut R,
) -> Result<KrausChannel> {
    let env_qubits = if kraus_count <= 1 {
        0
    } else {
        (usize::BITS - (kraus_count - 1).leading_zeros()) as usize
    };
    check_qubit_budget(qubits + env_qubits)?;
    let d = 1usize << qubits;
    let de = 1usize << env_qubits;
    let u = haar_random_unitary(qubits + env_qubits, rng)?;
    // Environment occupies the leading (most significant) register, so the
    // block at rows [e*d, (e+1)*d) and columns [0, d) is K_e. Completeness
    // needs every block, so the count rounds up to 2^env.
    let mut ops = Vec::with_capacity(de);
    for e in 0..de {
        let mut k = CMat::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                k[(i, j)] = u[(e * d + i, j)];
            }
        }
        ops.push(k);
    }
    KrausChannel::new(ops)
}
