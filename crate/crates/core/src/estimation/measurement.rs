use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::correlations::SldDecomposition;
use crate::ensembles::seeded;
use crate::error::{Error, Result};
use crate::qmat::{DensityMatrix, LocalHamiltonian};
use crate::scalar::Scalar;

/// Population noise: each `d_j` is multiplied by `1 + σξ_j` with independent
/// standard normal `ξ_j`, clamped to `[0, 1]` and renormalised. `σ = 0` is
/// the exact ensemble average.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub sigma: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub const fn exact() -> Self {
        Self { sigma: 0.0, seed: 0 }
    }

    pub fn gaussian(sigma: f64, seed: u64) -> Self {
        Self { sigma, seed }
    }

    pub fn is_exact(&self) -> bool {
        self.sigma == 0.0
    }
}

impl Default for NoiseSpec {
    fn default() -> Self {
        Self::exact()
    }
}

/// Ensemble populations `d_j = ⟨λ_j|ρ^{φ}|λ_j⟩` of the encoded state in the
/// eigenbasis of a reference SLD.
pub fn measure_populations<T: Scalar>(
    rho: &DensityMatrix<T>,
    h: &LocalHamiltonian<T>,
    phi_true: T,
    sldref: &SldDecomposition<T>,
    noise: NoiseSpec,
) -> Result<Vec<T>> {
    if sldref.dim() != rho.dim() {
        return Err(Error::BasisMismatch { basis: sldref.dim(), state: rho.dim() });
    }
    let encoded = rho.evolve(h, phi_true)?;
    let mut d = sldref.populations(encoded.matrix());
    if !noise.is_exact() {
        let mut rng = seeded(noise.seed);
        for x in d.iter_mut() {
            let xi: f64 = rng.sample(StandardNormal);
            *x = (*x * T::lit(1.0 + noise.sigma * xi)).max(T::zero()).min(T::one());
        }
        let total: T = d.iter().copied().sum();
        if total > T::zero() {
            d.iter_mut().for_each(|x| *x /= total);
        }
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlations::sld;
    use crate::probes::{black_box_setting, make_probe, ProbeFamily};
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn unevolved_populations_sum_to_one() {
        let rho = make_probe::<f64>(&ProbeFamily::Q(0.6)).unwrap();
        let h = black_box_setting(1).unwrap();
        let s = sld(&rho, &h, FRAC_PI_4).unwrap();
        let d = measure_populations(&rho, &h, 0.0, &s, NoiseSpec::exact()).unwrap();
        assert!((d.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        assert!(d.iter().all(|&x| (-1e-12..=1.0 + 1e-12).contains(&x)));
    }

    #[test]
    fn classical_probe_worst_setting_is_phase_blind() {
        let rho = make_probe::<f64>(&ProbeFamily::C(0.8)).unwrap();
        let h = black_box_setting(3).unwrap();
        let s = sld(&rho, &h, FRAC_PI_4).unwrap();
        let d0 = measure_populations(&rho, &h, 0.0, &s, NoiseSpec::exact()).unwrap();
        for phi in [0.3, 1.0, 2.5] {
            let d = measure_populations(&rho, &h, phi, &s, NoiseSpec::exact()).unwrap();
            for (a, b) in d.iter().zip(&d0) {
                assert!((a - b).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn populations_match_dense_evaluation() {
        // independent route: build U, form U ρ U† explicitly, sandwich each λ_j
        let rho = make_probe::<f64>(&ProbeFamily::Q(0.5)).unwrap();
        let h = black_box_setting(1).unwrap();
        let s = sld(&rho, &h, FRAC_PI_4).unwrap();
        let d = measure_populations(&rho, &h, FRAC_PI_4, &s, NoiseSpec::exact()).unwrap();
        let (c, sn) = (FRAC_PI_4.cos(), FRAC_PI_4.sin());
        let u = crate::qmat::ComplexMatrix::new(
            2,
            vec![
                num_complex::Complex::new(c, -sn),
                num_complex::Complex::new(0.0, 0.0),
                num_complex::Complex::new(0.0, 0.0),
                num_complex::Complex::new(c, sn),
            ],
        )
        .unwrap()
        .kron(&crate::qmat::ComplexMatrix::identity(2));
        let encoded = rho.matrix().conjugate_by(&u);
        for (dj, v) in d.iter().zip(&s.eigenbasis) {
            assert!((dj - encoded.braket(v, v).re).abs() < 1e-14);
        }
    }

    #[test]
    fn noisy_populations_are_normalised_and_reproducible() {
        let rho = make_probe::<f64>(&ProbeFamily::Q(0.6)).unwrap();
        let h = black_box_setting(1).unwrap();
        let s = sld(&rho, &h, FRAC_PI_4).unwrap();
        let noise = NoiseSpec::gaussian(0.05, 11);
        let a = measure_populations(&rho, &h, FRAC_PI_4, &s, noise).unwrap();
        let b = measure_populations(&rho, &h, FRAC_PI_4, &s, noise).unwrap();
        assert_eq!(a, b);
        assert!((a.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        let exact = measure_populations(&rho, &h, FRAC_PI_4, &s, NoiseSpec::exact()).unwrap();
        assert_ne!(a, exact);
    }

    #[test]
    fn basis_mismatch_is_reported() {
        let rho = make_probe::<f64>(&ProbeFamily::Q(0.6)).unwrap();
        let h = black_box_setting(1).unwrap();
        let s = sld(&rho, &h, 0.0).unwrap();
        let bigger = DensityMatrix::<f64>::maximally_mixed((2, 3));
        assert!(matches!(
            measure_populations(&bigger, &h, 0.0, &s, NoiseSpec::exact()),
            Err(Error::BasisMismatch { basis: 4, state: 6 })
        ));
    }
}
