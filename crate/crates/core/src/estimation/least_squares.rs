use crate::correlations::SldDecomposition;
use crate::error::{Error, Result};
use crate::qmat::{DensityMatrix, LocalHamiltonian};
use crate::scalar::Scalar;
use crate::tolerances;

/// Search interval and tolerance for the least-squares phase fit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchSpec {
    pub lo: f64,
    pub hi: f64,
    pub tol: f64,
}

impl Default for SearchSpec {
    /// `[0, π/2]` to 1e-9.
    fn default() -> Self {
        Self { lo: 0.0, hi: std::f64::consts::FRAC_PI_2, tol: 1e-9 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LeastSquaresEstimate<T: Scalar> {
    pub phi_hat: T,
    /// `Υ(φ̂)`.
    pub residual: T,
    /// `Υ` is flat over the interval: the data carry no phase information.
    pub failed: bool,
}

const SCAN_POINTS: usize = 65;
const STARTS: usize = 4;
const MAX_GOLDEN_STEPS: usize = 200;

/// Fits `φ` by minimising `Υ(φ) = Σ_j [d_j^th(φ) - d_j^meas]²`, where
/// `d^th(φ)` are the model populations of `ρ^φ` in the SLD basis.
///
/// The interval is split into four equal brackets, one golden-section search
/// per bracket; the lowest residual wins.
pub fn least_squares_estimate<T: Scalar>(
    d_meas: &[T],
    rho: &DensityMatrix<T>,
    h: &LocalHamiltonian<T>,
    sldref: &SldDecomposition<T>,
    search: SearchSpec,
) -> Result<LeastSquaresEstimate<T>> {
    if d_meas.len() != sldref.dim() {
        return Err(Error::BasisMismatch { basis: sldref.dim(), state: d_meas.len() });
    }
    let objective = |phi: T| -> Result<T> {
        let model = sldref.populations(rho.evolve(h, phi)?.matrix());
        Ok(model.iter().zip(d_meas).map(|(a, b)| (*a - *b) * (*a - *b)).sum())
    };
    let (lo, hi) = (T::lit(search.lo), T::lit(search.hi));
    let width = hi - lo;

    let mut scan_min = (T::infinity(), lo);
    let mut scan_max = T::neg_infinity();
    for i in 0..SCAN_POINTS {
        let phi = lo + width * T::lit(i as f64 / (SCAN_POINTS - 1) as f64);
        let v = objective(phi)?;
        if v < scan_min.0 {
            scan_min = (v, phi);
        }
        scan_max = scan_max.max(v);
    }
    if scan_max - scan_min.0 < T::tol(tolerances::FLAT) {
        return Ok(LeastSquaresEstimate { phi_hat: scan_min.1, residual: scan_min.0, failed: true });
    }

    let mut best = (scan_min.0, scan_min.1);
    let bracket = width / T::lit(STARTS as f64);
    for s in 0..STARTS {
        let a = lo + bracket * T::lit(s as f64);
        let (phi, v) = golden_section(&objective, a, a + bracket, T::tol(search.tol))?;
        if v < best.0 {
            best = (v, phi);
        }
    }
    Ok(LeastSquaresEstimate { phi_hat: best.1, residual: best.0, failed: false })
}

fn golden_section<T: Scalar>(f: &impl Fn(T) -> Result<T>, mut a: T, mut b: T, tol: T) -> Result<(T, T)> {
    let inv_phi = T::lit((5f64.sqrt() - 1.0) / 2.0);
    let mut c = b - (b - a) * inv_phi;
    let mut d = a + (b - a) * inv_phi;
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    for _ in 0..MAX_GOLDEN_STEPS {
        if (b - a).abs() <= tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * inv_phi;
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * inv_phi;
            fd = f(d)?;
        }
    }
    let mid = (a + b) * T::lit(0.5);
    let candidates = [(mid, f(mid)?), (a, f(a)?), (b, f(b)?)];
    Ok(candidates
        .into_iter()
        .fold((mid, T::infinity()), |acc, (x, v)| if v < acc.1 { (x, v) } else { acc }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlations::sld;
    use crate::estimation::{measure_populations, NoiseSpec};
    use crate::probes::{black_box_setting, make_probe, ProbeFamily};
    use std::f64::consts::FRAC_PI_4;

    fn fit(family: ProbeFamily, k: u8, phi_true: f64, phi_ref: f64) -> LeastSquaresEstimate<f64> {
        let rho = make_probe::<f64>(&family).unwrap();
        let h = black_box_setting(k).unwrap();
        let s = sld(&rho, &h, phi_ref).unwrap();
        let d = measure_populations(&rho, &h, phi_true, &s, NoiseSpec::exact()).unwrap();
        least_squares_estimate(&d, &rho, &h, &s, SearchSpec::default()).unwrap()
    }

    #[test]
    fn recovers_quarter_pi_for_discordant_probe() {
        let est = fit(ProbeFamily::Q(0.7), 1, FRAC_PI_4, FRAC_PI_4);
        assert!(!est.failed);
        assert!((est.phi_hat - FRAC_PI_4).abs() < 1e-6, "{}", est.phi_hat);
    }

    #[test]
    fn classical_probe_worst_setting_fails() {
        assert!(fit(ProbeFamily::C(0.7), 3, FRAC_PI_4, FRAC_PI_4).failed);
    }

    #[test]
    fn zero_phase_is_recovered() {
        for k in 1..=3 {
            let est = fit(ProbeFamily::Q(0.6), k, 0.0, 0.0);
            assert!(!est.failed);
            assert!(est.phi_hat.abs() < 1e-6, "k={k}: {}", est.phi_hat);
        }
    }

    #[test]
    fn golden_section_finds_parabola_vertex() {
        let (x, v) = golden_section(&|t: f64| Ok((t - 0.3).powi(2)), 0.0, 1.0, 1e-10).unwrap();
        assert!((x - 0.3).abs() < 1e-9 && v < 1e-18);
    }
}
