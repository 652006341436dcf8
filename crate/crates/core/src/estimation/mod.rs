//! Black-box phase estimation in silico: encode a phase, measure the ensemble
//! in the SLD eigenbasis, fit the phase by least squares and reconstruct the
//! estimator variance.

mod adaptive;
mod least_squares;
mod measurement;

pub use adaptive::{adaptive_localize, AdaptiveTrace};
pub use least_squares::{least_squares_estimate, LeastSquaresEstimate, SearchSpec};
pub use measurement::{measure_populations, NoiseSpec};

use serde::Serialize;

use crate::correlations::sld;
use crate::error::{Error, Result};
use crate::probes::{black_box_setting, make_probe, ProbeFamily};
use crate::scalar::Scalar;
use crate::tolerances;

/// Molecule count of the reference experiment.
pub const DEFAULT_NU: u64 = 1_000_000_000_000_000;

/// One simulated experiment: probe, setting, measured populations and the
/// reconstructed statistics.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Serialize")]
pub struct EstimationRun<T: Scalar> {
    pub probe_label: String,
    pub p: Option<f64>,
    pub setting_k: u8,
    /// True phase, also the design phase of the SLD measurement.
    pub phi0: T,
    pub nu: u64,
    pub d_meas: Vec<T>,
    pub l_values: Vec<T>,
    pub phi_hat_mean: T,
    /// `None` when the run failed.
    pub phi_hat_var: Option<T>,
    pub f_exp: T,
    pub failed: bool,
    pub residual: T,
    pub noise_sigma: f64,
    pub seed: u64,
}

impl<T: Scalar> EstimationRun<T> {
    /// `ν · Var`, the variance in units of one probe.
    pub fn nu_var_product(&self) -> Option<T> {
        self.phi_hat_var.map(|v| v * T::lit(self.nu as f64))
    }

    /// `ν · Var · F_exp`, equal to one when the Cramér-Rao bound is saturated.
    pub fn cramer_rao_product(&self) -> Option<T> {
        self.nu_var_product().map(|x| x * self.f_exp)
    }
}

impl<T: Scalar + Serialize> EstimationRun<T> {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("run serialises")
    }
}

/// `F_exp = Σ_j l_j² d_j`.
pub fn experimental_fisher<T: Scalar>(d: &[T], l: &[T]) -> T {
    d.iter().zip(l).map(|(d, l)| *l * *l * *d).sum()
}

/// `Var = [Σ l_j² d_j - (Σ l_j d_j)²] / (ν F_exp²)`.
pub fn estimator_statistics<T: Scalar>(d: &[T], l: &[T], f_exp: T, nu: u64) -> Result<T> {
    if f_exp <= T::tol(tolerances::FLAT) {
        return Err(Error::ZeroInformation(f_exp.as_f64()));
    }
    let second = experimental_fisher(d, l);
    let first: T = d.iter().zip(l).map(|(d, l)| *l * *d).sum();
    Ok((second - first * first) / (T::lit(nu as f64) * f_exp * f_exp))
}

/// Full pipeline for one probe and setting, with the SLD measurement
/// designed at the true phase.
pub fn run_experiment<T: Scalar>(
    probe: &ProbeFamily,
    k: u8,
    phi_true: T,
    nu: u64,
    noise: NoiseSpec,
) -> Result<EstimationRun<T>> {
    if nu == 0 {
        return Err(Error::ParameterOutOfRange { name: "nu", value: 0.0, lo: 1.0, hi: f64::INFINITY });
    }
    if !(noise.sigma >= 0.0 && noise.sigma.is_finite()) {
        return Err(Error::ParameterOutOfRange { name: "noise", value: noise.sigma, lo: 0.0, hi: f64::INFINITY });
    }
    let rho = make_probe::<T>(probe)?;
    let h = black_box_setting::<T>(k)?;
    let design = sld(&rho, &h, phi_true)?;
    let d_meas = measure_populations(&rho, &h, phi_true, &design, noise)?;
    let f_exp = experimental_fisher(&d_meas, &design.eigenvalues);
    let fit = least_squares_estimate(&d_meas, &rho, &h, &design, SearchSpec::default())?;
    let var = estimator_statistics(&d_meas, &design.eigenvalues, f_exp, nu);
    let failed = fit.failed || var.is_err();
    Ok(EstimationRun {
        probe_label: probe.label().to_owned(),
        p: probe.parameter(),
        setting_k: k,
        phi0: phi_true,
        nu,
        d_meas,
        l_values: design.eigenvalues,
        phi_hat_mean: fit.phi_hat,
        phi_hat_var: if failed { None } else { var.ok() },
        f_exp,
        failed,
        residual: fit.residual,
        noise_sigma: noise.sigma,
        seed: noise.seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probes::{predicted_qfi, ProbeKind};
    use std::f64::consts::FRAC_PI_4;

    fn exact(family: ProbeFamily, k: u8) -> EstimationRun<f64> {
        run_experiment(&family, k, FRAC_PI_4, DEFAULT_NU, NoiseSpec::exact()).unwrap()
    }

    #[test]
    fn pure_correlated_probe_variance() {
        let run = exact(ProbeFamily::Q(1.0), 1);
        let var = run.phi_hat_var.unwrap();
        assert!((var - 2.5e-16).abs() < 1e-25, "{var:e}");
    }

    #[test]
    fn zero_information_is_an_error() {
        let run = exact(ProbeFamily::C(0.6), 3);
        assert!(run.failed);
        assert_eq!(run.f_exp, 0.0);
        assert!(matches!(
            estimator_statistics(&run.d_meas, &run.l_values, run.f_exp, run.nu),
            Err(Error::ZeroInformation(_))
        ));
    }

    #[test]
    fn variance_scales_inversely_with_ensemble_size() {
        let run = exact(ProbeFamily::Q(0.6), 2);
        let a = estimator_statistics(&run.d_meas, &run.l_values, run.f_exp, 1000).unwrap();
        let b = estimator_statistics(&run.d_meas, &run.l_values, run.f_exp, 2000).unwrap();
        assert_eq!(a, 2.0 * b);
    }

    #[test]
    fn exact_runs_saturate_cramer_rao() {
        for kind in [ProbeKind::Q, ProbeKind::C] {
            for k in 1..=3 {
                for p in [0.2, 0.5, 0.9] {
                    let run = exact(kind.family(p), k);
                    let f_th = predicted_qfi(kind, p, k).unwrap();
                    assert!((run.f_exp - f_th).abs() < 1e-9);
                    if run.failed {
                        assert_eq!((kind, k), (ProbeKind::C, 3));
                        continue;
                    }
                    assert!((run.cramer_rao_product().unwrap() - 1.0).abs() < 1e-9);
                    assert!((run.phi_hat_mean - FRAC_PI_4).abs() < 1e-6);
                }
            }
        }
    }

    #[test]
    fn json_record_carries_seed() {
        let run = run_experiment::<f64>(&ProbeFamily::Q(0.5), 1, FRAC_PI_4, 10, NoiseSpec::gaussian(0.05, 99)).unwrap();
        let v: serde_json::Value = serde_json::from_str(&run.to_json()).unwrap();
        assert_eq!(v["seed"], 99);
        assert_eq!(v["probe_label"], "Q");
        assert_eq!(v["d_meas"].as_array().unwrap().len(), 4);
    }

    #[test]
    fn rejects_bad_configuration() {
        assert!(run_experiment::<f64>(&ProbeFamily::Q(0.5), 4, 0.0, 1, NoiseSpec::exact()).is_err());
        assert!(run_experiment::<f64>(&ProbeFamily::Q(0.5), 1, 0.0, 0, NoiseSpec::exact()).is_err());
        assert!(run_experiment::<f64>(&ProbeFamily::Q(0.5), 1, 0.0, 1, NoiseSpec::gaussian(-0.1, 0)).is_err());
    }

    #[test]
    fn single_precision_pipeline() {
        let run = run_experiment::<f32>(&ProbeFamily::Q(0.8), 2, std::f32::consts::FRAC_PI_4, DEFAULT_NU, NoiseSpec::exact())
            .unwrap();
        assert!((run.f_exp - 4.0 * 0.64).abs() < 1e-4);
        assert!((run.phi_hat_mean - std::f32::consts::FRAC_PI_4).abs() < 1e-3);
    }
}
