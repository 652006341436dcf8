use super::{least_squares_estimate, measure_populations, NoiseSpec, SearchSpec};
use crate::correlations::{qfi, sld};
use crate::error::{Error, Result};
use crate::qmat::{DensityMatrix, LocalHamiltonian};
use crate::scalar::Scalar;
use crate::tolerances;

#[derive(Clone, Debug, PartialEq)]
pub struct AdaptiveTrace<T: Scalar> {
    /// `φ_trial(1), φ_trial(2), …`, starting from 0.
    pub trials: Vec<T>,
    pub converged: bool,
    /// 1-based iteration at which the trial phase first came within tolerance.
    pub converged_at: Option<usize>,
}

/// Adaptive localisation: measure in the SLD basis built at the current
/// trial phase, fit, and use the fit as the next trial phase.
pub fn adaptive_localize<T: Scalar>(
    rho: &DensityMatrix<T>,
    h: &LocalHamiltonian<T>,
    phi_true: T,
    max_iters: usize,
) -> Result<AdaptiveTrace<T>> {
    let f = qfi(rho, h)?;
    if f <= T::tol(tolerances::FLAT) {
        return Err(Error::NotIdentifiable(f.as_f64()));
    }
    let tol = T::tol(tolerances::ADAPT);
    let mut trial = T::zero();
    let mut trials = Vec::with_capacity(max_iters);
    for n in 1..=max_iters {
        trials.push(trial);
        if (trial - phi_true).abs() < tol {
            return Ok(AdaptiveTrace { trials, converged: true, converged_at: Some(n) });
        }
        let design = sld(rho, h, trial)?;
        let d = measure_populations(rho, h, phi_true, &design, NoiseSpec::exact())?;
        let fit = least_squares_estimate(&d, rho, h, &design, SearchSpec::default())?;
        if !fit.failed {
            trial = fit.phi_hat;
        }
    }
    Ok(AdaptiveTrace { trials, converged: false, converged_at: None })
}
