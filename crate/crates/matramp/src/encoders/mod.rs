//! Encodings of matrices into states and circuits: purification-based
//! density encodings, unitary-sum block encodings, canonical two-qubit
//! forms, and channel block encodings compiled from gate lists.

pub mod canonical;
pub mod cbe;
pub mod circuit;
pub mod dmse;
pub mod ubse;

pub use canonical::{
    canonical_angles, canonical_coefficients, canonical_gate, interaction_eta, kak_decompose,
    KakDecomposition,
};
pub use cbe::{compile_circuit_cbe, compile_trotter_cbe, ChannelBlockEncoding, VecChannel};
pub use circuit::{CircuitIr, Gate, PauliHamiltonian, PauliTerm};
pub use dmse::{dmse_initial_product, dmse_optimal, verify_dmse, DmseEncoding};
pub use ubse::{
    bell_label_state, ubse_from_bell_label, ubse_from_decomposition, verify_ubse, BellLabel,
    UbseEncoding,
};
