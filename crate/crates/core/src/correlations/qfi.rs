use num_complex::Complex;

use crate::error::{Error, Result};
use crate::qmat::{ComplexMatrix, DensityMatrix, LocalHamiltonian};
use crate::scalar::Scalar;
use crate::tolerances;

/// Matrix of `⟨ψ_i|O|ψ_l⟩` in the eigenbasis of `ρ`.
pub(crate) fn spectral_elements<T: Scalar>(rho: &DensityMatrix<T>, op: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let psi = rho.vectors();
    let n = rho.dim();
    let images: Vec<Vec<Complex<T>>> = psi.iter().map(|v| op.apply(v)).collect();
    let mut out = ComplexMatrix::zeros(n);
    for i in 0..n {
        for l in 0..n {
            out[(i, l)] = crate::qmat::inner(&psi[i], &images[l]);
        }
    }
    out
}

/// `(q_i - q_l)² / (q_i + q_l)`, or `None` when the pair is dropped by the
/// rank-deficiency cutoff.
#[inline]
pub(crate) fn pair_weight<T: Scalar>(qi: T, ql: T) -> Option<T> {
    let sum = qi + ql;
    if sum <= T::tol(tolerances::RANK_CUTOFF) {
        None
    } else {
        let d = qi - ql;
        Some(d * d / sum)
    }
}

pub(crate) fn check_dims<T: Scalar>(rho: &DensityMatrix<T>, h: &LocalHamiltonian<T>) -> Result<()> {
    if h.dim() != rho.dims().0 {
        return Err(Error::DimensionMismatch { expected: rho.dims().0, found: h.dim() });
    }
    Ok(())
}

/// Quantum Fisher information of `ρ` for phases generated by `H_A ⊗ 𝕀_B`:
///
/// `F = 4 Σ_{i<l} (q_i - q_l)²/(q_i + q_l) · |⟨ψ_i|H_A ⊗ 𝕀_B|ψ_l⟩|²`.
pub fn qfi<T: Scalar>(rho: &DensityMatrix<T>, h: &LocalHamiltonian<T>) -> Result<T> {
    check_dims(rho, h)?;
    let elems = spectral_elements(rho, &h.extended(rho.dims().1));
    let q = rho.probabilities();
    let mut acc = T::zero();
    for i in 0..q.len() {
        for l in i + 1..q.len() {
            if let Some(w) = pair_weight(q[i], q[l]) {
                acc += w * elems[(i, l)].norm_sqr();
            }
        }
    }
    Ok(T::lit(4.0) * acc)
}

/// `⟨O²⟩ - ⟨O⟩²` for `O = H_A ⊗ 𝕀_B`.
pub fn variance<T: Scalar>(rho: &DensityMatrix<T>, h: &LocalHamiltonian<T>) -> Result<T> {
    check_dims(rho, h)?;
    let op = h.extended(rho.dims().1);
    let mean = rho.matrix().trace_product(&op).re;
    let second = rho.matrix().trace_product(&(&op * &op)).re;
    Ok(second - mean * mean)
}

/// Checks `F(ρ; aH + b𝕀) = a² F(ρ; H)` to relative tolerance τ_closed.
pub fn qfi_scaling_check<T: Scalar>(rho: &DensityMatrix<T>, h: &LocalHamiltonian<T>, a: T, b: T) -> Result<bool> {
    let base = qfi(rho, h)?;
    let scaled = qfi(rho, &h.affine(a, b))?;
    let expected = a * a * base;
    Ok((scaled - expected).abs() <= T::tol(tolerances::CLOSED) * T::one().max(expected))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probes::{black_box_setting, make_probe, ProbeFamily};

    fn setting(k: u8) -> LocalHamiltonian<f64> {
        black_box_setting(k).unwrap()
    }

    #[test]
    fn discordant_probe_best_setting() {
        for p in [0.25, 0.5, 1.0] {
            let rho = make_probe::<f64>(&ProbeFamily::Q(p)).unwrap();
            let f = qfi(&rho, &setting(1)).unwrap();
            assert!((f - 8.0 * p * p / (1.0 + p * p)).abs() < 1e-12, "p={p}: {f}");
        }
    }

    #[test]
    fn classical_probe_worst_setting_vanishes() {
        let rho = make_probe::<f64>(&ProbeFamily::C(0.7)).unwrap();
        assert!(qfi(&rho, &setting(3)).unwrap().abs() < 1e-14);
    }

    #[test]
    fn pure_state_qfi_is_four_variances() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi = [h, 0.0, h, 0.0].map(|x| Complex::new(x, 0.0));
        let rho = DensityMatrix::pure(&psi, (2, 2)).unwrap();
        let z = setting(1);
        assert!((qfi(&rho, &z).unwrap() - 4.0).abs() < 1e-13);
        assert!((4.0 * variance(&rho, &z).unwrap() - 4.0).abs() < 1e-13);
    }

    #[test]
    fn rejects_mismatched_hamiltonian() {
        let rho = DensityMatrix::<f64>::maximally_mixed((2, 2));
        let h = LocalHamiltonian::from_matrix(ComplexMatrix::identity(4)).unwrap();
        assert!(matches!(qfi(&rho, &h), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn scaling_identity_examples() {
        let rho = make_probe::<f64>(&ProbeFamily::Q(0.5)).unwrap();
        let z = setting(1);
        assert!(qfi_scaling_check(&rho, &z, 1.0, 3.7).unwrap());
        assert!(qfi_scaling_check(&rho, &z, 2.0, 0.0).unwrap());
        let quadrupled = qfi(&rho, &z.affine(2.0, 0.0)).unwrap();
        assert!((quadrupled - 4.0 * qfi(&rho, &z).unwrap()).abs() < 1e-12);
        assert!(qfi_scaling_check(&rho, &z, 0.0, 1.0).unwrap());
        assert!(qfi(&rho, &z.affine(0.0, 1.0)).unwrap().abs() < 1e-14);
    }

    #[test]
    fn single_precision_qfi() {
        let rho = make_probe::<f32>(&ProbeFamily::Q(0.5)).unwrap();
        let f = qfi(&rho, &black_box_setting::<f32>(1).unwrap()).unwrap();
        assert!((f - 1.6).abs() < 1e-4, "{f}");
    }
}
