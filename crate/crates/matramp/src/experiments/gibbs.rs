//! Thermal-state weights at desk scale.
//!
//! For rho_beta = e^(-beta H)/Z the optimal row-register weight of the
//! purification-style encoding is the purity root
//!     gamma = sqrt(Tr e^(-2 beta H)) / Tr e^(-beta H),
//! checked here against the dense Frobenius norm and against the
//! purification identity: normalising vec(rho_beta) and tracing out the
//! column register must reproduce e^(-2 beta H)/Tr e^(-2 beta H).
//! The flat spectral family (one eigenvector weighted 2^(-n/2), the
//! rest sharing the remainder) admits closed forms for both weights and
//! pins the worst-case product gamma*lambda.

use crate::matrixize::vectorize;
use crate::qcore::{frobenius_norm, partial_trace, CMat, DensityMatrix, RngStream};
use crate::{encoders::PauliHamiltonian, encoders::PauliTerm, Error, Result};
use nalgebra::SymmetricEigen;
use rand::Rng;
use serde::Serialize;

/// Weights of the flat spectral family at one size.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralReport {
    pub n: usize,
    pub lambda: f64,
    pub gamma: f64,
    pub gamma_lambda: f64,
    pub closed_form: f64,
    pub residual: f64,
}

/// Thermal-weight comparison for one Hamiltonian and temperature.
#[derive(Debug, Clone, Serialize)]
pub struct GibbsReport {
    pub n: usize,
    pub beta: f64,
    pub gamma_dense: f64,
    pub gamma_formula: f64,
    pub gamma_residual: f64,
    pub purification_residual: f64,
    pub spectral: SpectralReport,
}

/// Partition-function route to the thermal weight, plus the dense and
/// purification cross-checks.
pub fn gibbs_demo(h: &PauliHamiltonian, beta: f64) -> Result<GibbsReport> {
    let n = h.n;
    if n == 0 || n > 5 {
        return Err(Error::arg(format!(
            "thermal demo runs at 1..=5 register qubits, got {n}"
        )));
    }
    if !beta.is_finite() || beta < 0.0 {
        return Err(Error::arg(format!("inverse temperature must be finite and >= 0, got {beta}")));
    }
    let dim = 1usize << n;
    let hm = h.matrix()?;
    let sym = hm.map(|z| z.re);
    let eig = SymmetricEigen::new(sym);
    let energies: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    // Shift by the ground energy before exponentiating; the ratio is
    // shift-invariant and this keeps both sums in range.
    let e0 = energies.iter().cloned().fold(f64::INFINITY, f64::min);
    let z: f64 = energies.iter().map(|e| (-beta * (e - e0)).exp()).sum();
    let z2: f64 = energies.iter().map(|e| (-2.0 * beta * (e - e0)).exp()).sum();
    let gamma_formula = z2.sqrt() / z;

    // Dense thermal state in the eigenbasis.
    let mut rho = CMat::zeros(dim, dim);
    for (k, e) in energies.iter().enumerate() {
        let w = (-beta * (e - e0)).exp() / z;
        let v = eig.eigenvectors.column(k);
        for i in 0..dim {
            for j in 0..dim {
                rho[(i, j)] += crate::qcore::C64::new(w * v[i] * v[j], 0.0);
            }
        }
    }
    let gamma_dense = frobenius_norm(&rho);
    let gamma_residual = (gamma_dense - gamma_formula).abs();

    // Purifying the row register: vec(rho)/gamma is a unit state on 2n
    // qubits whose row marginal is rho^2 / Tr rho^2.
    let vec_rho = vectorize(&rho)?;
    let unit = vec_rho.map(|z| z / crate::qcore::C64::new(gamma_dense, 0.0));
    let pure = DensityMatrix::new(&unit * unit.adjoint())?;
    let keep: Vec<usize> = (0..n).collect();
    let marginal = partial_trace(&pure, &keep)?;
    let mut target = CMat::zeros(dim, dim);
    for (k, e) in energies.iter().enumerate() {
        let w = (-2.0 * beta * (e - e0)).exp() / z2;
        let v = eig.eigenvectors.column(k);
        for i in 0..dim {
            for j in 0..dim {
                target[(i, j)] += crate::qcore::C64::new(w * v[i] * v[j], 0.0);
            }
        }
    }
    let purification_residual = frobenius_norm(&(marginal.matrix() - &target));

    Ok(GibbsReport {
        n,
        beta,
        gamma_dense,
        gamma_formula,
        gamma_residual,
        purification_residual,
        spectral: spectral_family_report(n)?,
    })
}

/// Flat spectral family: one branch at probability 2^(-n/2), the other
/// 2^n - 1 branches sharing the rest. gamma is the 2-norm of the
/// probability vector, lambda = 2^(n/2) is the flat-superposition
/// weight, and their product has the closed form
/// sqrt(((2^n - 1) + 2^n (1 - 2^(-n/2))^2) / (2^n - 1)).
pub fn spectral_family_report(n: usize) -> Result<SpectralReport> {
    if n == 0 || n > 5 {
        return Err(Error::arg(format!(
            "spectral family sized for 1..=5 qubits, got {n}"
        )));
    }
    let d = (1u64 << n) as f64;
    let p0 = 1.0 / d.sqrt();
    let p1 = (1.0 - p0) / (d - 1.0);
    let gamma = (p0 * p0 + (d - 1.0) * p1 * p1).sqrt();
    let lambda = d.sqrt();
    let gamma_lambda = gamma * lambda;
    let closed_form = (((d - 1.0) + d * (1.0 - p0).powi(2)) / (d - 1.0)).sqrt();
    let residual = (gamma_lambda - closed_form).abs();
    Ok(SpectralReport {
        n,
        lambda,
        gamma,
        gamma_lambda,
        closed_form,
        residual,
    })
}

/// Random one- and two-site Pauli Hamiltonian with coefficients uniform
/// in [-1, 1]; evolution knobs are left at zero since only the matrix
/// is used here.
pub fn random_two_local_hamiltonian(
    n: usize,
    terms: usize,
    rng: &mut RngStream,
) -> Result<PauliHamiltonian> {
    if n == 0 {
        return Err(Error::arg("need at least one qubit"));
    }
    if terms == 0 {
        return Err(Error::arg("need at least one term"));
    }
    let letters = ['X', 'Y', 'Z'];
    let mut list = Vec::with_capacity(terms);
    for _ in 0..terms {
        let mut pauli: Vec<char> = vec!['I'; n];
        let sites = if n == 1 { 1 } else { rng.gen_range(1..=2usize) };
        let first = rng.gen_range(0..n);
        pauli[first] = letters[rng.gen_range(0..3)];
        if sites == 2 {
            let mut second = rng.gen_range(0..n - 1);
            if second >= first {
                second += 1;
            }
            pauli[second] = letters[rng.gen_range(0..3)];
        }
        list.push(PauliTerm {
            coeff: rng.gen_range(-1.0..=1.0),
            pauli: pauli.into_iter().collect(),
        });
    }
    Ok(PauliHamiltonian {
        n,
        t: 0.0,
        r: 1,
        terms: list,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::substream;

    #[test]
    fn infinite_temperature_gives_the_flat_weight() {
        let mut rng = substream(3, &[0x66, 1]);
        let h = random_two_local_hamiltonian(3, 5, &mut rng).unwrap();
        let r = gibbs_demo(&h, 0.0).unwrap();
        let expect = 1.0 / (8f64).sqrt();
        assert!((r.gamma_formula - expect).abs() < 1e-12);
        assert!(r.gamma_residual < 1e-10);
        assert!(r.purification_residual < 1e-10);
    }

    #[test]
    fn random_hamiltonians_pass_both_cross_checks() {
        for seed in 0..4u64 {
            let mut rng = substream(seed, &[0x66, 2]);
            let h = random_two_local_hamiltonian(3, 6, &mut rng).unwrap();
            let r = gibbs_demo(&h, 1.0).unwrap();
            assert!(r.gamma_residual < 1e-10, "seed {seed}: {}", r.gamma_residual);
            assert!(
                r.purification_residual < 1e-10,
                "seed {seed}: {}",
                r.purification_residual
            );
            assert!(r.gamma_formula <= 1.0 + 1e-12);
            assert!(r.gamma_formula >= 1.0 / (8f64).sqrt() - 1e-12);
        }
    }

    #[test]
    fn cold_limit_concentrates_the_weight() {
        let h = PauliHamiltonian {
            n: 2,
            t: 0.0,
            r: 1,
            terms: vec![PauliTerm {
                coeff: 1.0,
                pauli: "ZZ".into(),
            }],
        };
        let hot = gibbs_demo(&h, 0.1).unwrap().gamma_formula;
        let cold = gibbs_demo(&h, 8.0).unwrap().gamma_formula;
        assert!(hot < cold);
        // ZZ has a two-fold ground space, so the cold weight tends to
        // the purity root of the rank-two mixture.
        assert!((cold - 1.0 / (2f64).sqrt()).abs() < 1e-3, "cold {cold}");
    }

    #[test]
    fn spectral_product_matches_the_closed_form() {
        for n in 1..=5usize {
            let r = spectral_family_report(n).unwrap();
            assert!(r.residual < 1e-12, "n={n}: {}", r.residual);
            assert!((r.lambda - (1u64 << n) as f64 / r.lambda).abs() < 1e-12);
        }
        let four = spectral_family_report(4).unwrap();
        assert!((four.gamma_lambda - 1.6f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn knobs_are_validated() {
        let h = PauliHamiltonian {
            n: 6,
            t: 0.0,
            r: 1,
            terms: vec![PauliTerm {
                coeff: 1.0,
                pauli: "ZZZZZZ".into(),
            }],
        };
        assert!(gibbs_demo(&h, 1.0).is_err());
        let h2 = PauliHamiltonian {
            n: 2,
            t: 0.0,
            r: 1,
            terms: vec![PauliTerm {
                coeff: 1.0,
                pauli: "XX".into(),
            }],
        };
        assert!(gibbs_demo(&h2, -1.0).is_err());
        assert!(gibbs_demo(&h2, f64::NAN).is_err());
        assert!(spectral_family_report(0).is_err());
        assert!(spectral_family_report(6).is_err());
    }
}
