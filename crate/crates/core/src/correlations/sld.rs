use num_complex::Complex;

use super::qfi::{check_dims, spectral_elements};
use crate::error::Result;
use crate::qmat::{eig_hermitian, ComplexMatrix, DensityMatrix, LocalHamiltonian};
use crate::scalar::Scalar;
use crate::tolerances;

/// Spectral form `L = Σ_j l_j |λ_j⟩⟨λ_j|` of the symmetric logarithmic
/// derivative at a reference phase.
#[derive(Clone, Debug)]
pub struct SldDecomposition<T: Scalar> {
    pub eigenvalues: Vec<T>,
    pub eigenbasis: Vec<Vec<Complex<T>>>,
    pub reference_phase: T,
    pub setting: LocalHamiltonian<T>,
    /// `ρ^{φ₀}`, the state the derivative was taken at.
    pub evolved: DensityMatrix<T>,
}

impl<T: Scalar> SldDecomposition<T> {
    pub fn operator(&self) -> ComplexMatrix<T> {
        let n = self.eigenbasis.len();
        let mut out = ComplexMatrix::zeros(n);
        for (l, v) in self.eigenvalues.iter().zip(&self.eigenbasis) {
            out = &out + &ComplexMatrix::outer(v, v).scale_real(*l);
        }
        out
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.eigenbasis.len()
    }

    /// Populations `⟨λ_j|σ|λ_j⟩` of an arbitrary state in this basis.
    pub fn populations(&self, sigma: &ComplexMatrix<T>) -> Vec<T> {
        self.eigenbasis.iter().map(|v| sigma.braket(v, v).re).collect()
    }

    /// `Tr[ρ^{φ₀} L²] = Σ_j l_j² ⟨λ_j|ρ^{φ₀}|λ_j⟩`.
    pub fn fisher_information(&self) -> T {
        self.populations(self.evolved.matrix())
            .iter()
            .zip(&self.eigenvalues)
            .map(|(d, l)| *l * *l * *d)
            .sum()
    }

    /// `Tr[ρ^{φ₀} L]`, zero for a genuine SLD.
    pub fn mean(&self) -> T {
        self.populations(self.evolved.matrix())
            .iter()
            .zip(&self.eigenvalues)
            .map(|(d, l)| *l * *d)
            .sum()
    }

    /// `‖∂_φρ - (ρL + Lρ)/2‖₂` (Frobenius).
    pub fn defining_equation_residual(&self) -> T {
        let rho = self.evolved.matrix();
        let derivative = phase_derivative(&self.evolved, &self.setting);
        let l = self.operator();
        let anti = (&(rho * &l) + &(&l * rho)).scale_real(T::lit(0.5));
        (&derivative - &anti).frobenius_norm()
    }
}

/// `∂_φ ρ^φ = -i [H_A ⊗ 𝕀_B, ρ^φ]`.
pub fn phase_derivative<T: Scalar>(evolved: &DensityMatrix<T>, h: &LocalHamiltonian<T>) -> ComplexMatrix<T> {
    let op = h.extended(evolved.dims().1);
    op.commutator(evolved.matrix()).scale(Complex::new(T::zero(), -T::one()))
}

/// Symmetric logarithmic derivative of `ρ^φ` at `φ₀`.
///
/// In the eigenbasis of `ρ^{φ₀}` the operator is
/// `L_il = 2⟨ψ_i|∂_φρ|ψ_l⟩/(q_i + q_l)`; pairs below the rank cutoff get 0.
pub fn sld<T: Scalar>(rho: &DensityMatrix<T>, h: &LocalHamiltonian<T>, phi0: T) -> Result<SldDecomposition<T>> {
    check_dims(rho, h)?;
    let evolved = rho.evolve(h, phi0)?;
    let elems = spectral_elements(&evolved, &h.extended(rho.dims().1));
    let q = evolved.probabilities();
    let n = evolved.dim();
    // ⟨ψ_i|∂ρ|ψ_l⟩ = i (q_i - q_l) h_il
    let mut in_basis = ComplexMatrix::zeros(n);
    let two = T::lit(2.0);
    for i in 0..n {
        for l in 0..n {
            let sum = q[i] + q[l];
            if sum <= T::tol(tolerances::RANK_CUTOFF) {
                continue;
            }
            let d = Complex::new(T::zero(), q[i] - q[l]) * elems[(i, l)];
            in_basis[(i, l)] = d.scale(two / sum);
        }
    }
    let mut psi = ComplexMatrix::zeros(n);
    for (j, v) in evolved.vectors().iter().enumerate() {
        for i in 0..n {
            psi[(i, j)] = v[i];
        }
    }
    let l = in_basis.conjugate_by(&psi).hermitian_part();
    let eigen = eig_hermitian(&l)?;
    let eigenvalues = eigen
        .values
        .into_iter()
        .map(|x| if x.abs() < T::epsilon() * T::lit(64.0) { T::zero() } else { x })
        .collect();
    Ok(SldDecomposition {
        eigenvalues,
        eigenbasis: eigen.vectors,
        reference_phase: phi0,
        setting: h.clone(),
        evolved,
    })
}

impl<T: Scalar> SldDecomposition<T> {
    pub fn is_trivial(&self) -> bool {
        self.eigenvalues.iter().all(|l| l.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlations::qfi;
    use crate::probes::{black_box_setting, make_probe, ProbeFamily};
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn commuting_state_has_zero_sld() {
        let rho = DensityMatrix::new(ComplexMatrix::diag(&[0.4, 0.3, 0.2, 0.1]), (2, 2)).unwrap();
        let s = sld(&rho, &black_box_setting(1).unwrap(), 0.3).unwrap();
        assert!(s.is_trivial());
    }

    #[test]
    fn discordant_probe_worst_setting_spectrum() {
        // eigenvalues ±2p, each twice; Tr[ρL²] = 4p²
        for p in [0.3, 0.5, 0.8] {
            let rho = make_probe::<f64>(&ProbeFamily::Q(p)).unwrap();
            let s = sld(&rho, &black_box_setting(3).unwrap(), FRAC_PI_4).unwrap();
            let expected = [-2.0 * p, -2.0 * p, 2.0 * p, 2.0 * p];
            for (l, e) in s.eigenvalues.iter().zip(expected) {
                assert!((l - e).abs() < 1e-12, "p={p}: {:?}", s.eigenvalues);
            }
            assert!((s.fisher_information() - 4.0 * p * p).abs() < 1e-12);
        }
    }

    #[test]
    fn classical_probe_worst_setting_is_trivial() {
        let rho = make_probe::<f64>(&ProbeFamily::C(0.6)).unwrap();
        let s = sld(&rho, &black_box_setting(3).unwrap(), FRAC_PI_4).unwrap();
        assert!(s.is_trivial(), "{:?}", s.eigenvalues);
    }

    #[test]
    fn defining_equation_and_qfi_consistency() {
        for family in [ProbeFamily::Q(0.7), ProbeFamily::C(0.7), ProbeFamily::Werner(0.4)] {
            let rho = make_probe::<f64>(&family).unwrap();
            for k in 1..=3 {
                let h = black_box_setting(k).unwrap();
                let s = sld(&rho, &h, 0.37).unwrap();
                assert!(s.defining_equation_residual() < 1e-12);
                assert!(s.mean().abs() < 1e-12);
                assert!((s.fisher_information() - qfi(&rho, &h).unwrap()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn pure_state_kernel_pairs_are_harmless() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi = [h, 0.0, 0.0, h].map(|x| Complex::new(x, 0.0));
        let rho = DensityMatrix::pure(&psi, (2, 2)).unwrap();
        let s = sld(&rho, &black_box_setting(2).unwrap(), 0.2).unwrap();
        assert!(s.defining_equation_residual() < 1e-12);
        assert!((s.fisher_information() - 4.0).abs() < 1e-12);
    }
}
