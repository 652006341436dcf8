use std::str::FromStr;

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::eigen::{eig_hermitian, orthonormality_defect};
use super::hamiltonian::LocalHamiltonian;
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

impl FromStr for Subsystem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Subsystem::A),
            "B" | "b" => Ok(Subsystem::B),
            other => Err(Error::BadSubsystemLabel(other.to_owned())),
        }
    }
}

/// Validated bipartite state `ρ_AB` with its spectral decomposition cached.
///
/// `probabilities[i]` pairs with `vectors[i]`; both are in ascending order of
/// probability.
#[derive(Clone, Debug)]
pub struct DensityMatrix<T: Scalar> {
    matrix: ComplexMatrix<T>,
    dims: (usize, usize),
    probabilities: Vec<T>,
    vectors: Vec<Vec<Complex<T>>>,
}

impl<T: Scalar> DensityMatrix<T> {
    /// Validates `matrix` as a state on `C^{d_A} ⊗ C^{d_B}`.
    ///
    /// Eigenvalues in `[-τ_psd, 0)` are clamped to zero and the spectrum is
    /// renormalised; the stored matrix is then rebuilt from it.
    pub fn new(matrix: ComplexMatrix<T>, dims: (usize, usize)) -> Result<Self> {
        let n = dims.0 * dims.1;
        if n != matrix.dim() {
            return Err(Error::DimensionMismatch { expected: n, found: matrix.dim() });
        }
        let trace = matrix.trace();
        if (trace - Complex::one()).norm() > T::tol(tolerances::TRACE) {
            return Err(Error::NotUnitTrace { trace: trace.re.as_f64() });
        }
        let eigen = eig_hermitian(&matrix)?;
        let min = eigen.values[0];
        if min < -T::tol(tolerances::PSD) {
            return Err(Error::NotPositiveSemidefinite { min_eigenvalue: min.as_f64() });
        }
        if min < T::zero() {
            let mut probs: Vec<T> = eigen.values.iter().map(|&q| q.max(T::zero())).collect();
            let total: T = probs.iter().copied().sum();
            probs.iter_mut().for_each(|q| *q /= total);
            return Ok(Self::assemble(probs, eigen.vectors, dims));
        }
        Ok(Self {
            matrix: matrix.hermitian_part(),
            dims,
            probabilities: eigen.values,
            vectors: eigen.vectors,
        })
    }

    /// Builds `Σ_i q_i |ψ_i⟩⟨ψ_i|` and keeps the supplied decomposition as the
    /// cached spectrum, so callers control the basis inside degenerate eigenspaces.
    pub fn from_spectrum(
        probabilities: Vec<T>,
        vectors: Vec<Vec<Complex<T>>>,
        dims: (usize, usize),
    ) -> Result<Self> {
        let n = dims.0 * dims.1;
        if probabilities.len() != n || vectors.len() != n || vectors.iter().any(|v| v.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: vectors.len() });
        }
        if let Some(&q) = probabilities.iter().find(|&&q| q < -T::tol(tolerances::PSD)) {
            return Err(Error::NotPositiveSemidefinite { min_eigenvalue: q.as_f64() });
        }
        let total: T = probabilities.iter().copied().sum();
        if (total - T::one()).abs() > T::tol(tolerances::TRACE) {
            return Err(Error::NotUnitTrace { trace: total.as_f64() });
        }
        if orthonormality_defect(&vectors) > T::tol(tolerances::ORTH) {
            return Err(Error::Parse("spectral vectors are not orthonormal".into()));
        }
        let probs = probabilities.into_iter().map(|q| q.max(T::zero())).collect();
        Ok(Self::assemble(probs, vectors, dims))
    }

    /// Pure state `|ψ⟩⟨ψ|`; `psi` is normalised here.
    pub fn pure(psi: &[Complex<T>], dims: (usize, usize)) -> Result<Self> {
        let norm = super::matrix::norm(psi);
        if norm.is_zero() {
            return Err(Error::ZeroPurity);
        }
        let psi: Vec<Complex<T>> = psi.iter().map(|z| z.unscale(norm)).collect();
        Self::new(ComplexMatrix::outer(&psi, &psi), dims)
    }

    pub fn maximally_mixed(dims: (usize, usize)) -> Self {
        let n = dims.0 * dims.1;
        let q = T::one() / T::lit(n as f64);
        let vectors = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Complex::one() } else { Complex::zero() }).collect())
            .collect();
        Self::assemble(vec![q; n], vectors, dims)
    }

    fn assemble(probabilities: Vec<T>, vectors: Vec<Vec<Complex<T>>>, dims: (usize, usize)) -> Self {
        let n = dims.0 * dims.1;
        let mut matrix = ComplexMatrix::zeros(n);
        for (q, v) in probabilities.iter().zip(&vectors) {
            if q.is_zero() {
                continue;
            }
            for i in 0..n {
                let vi = v[i].scale(*q);
                for j in 0..n {
                    matrix[(i, j)] += vi * v[j].conj();
                }
            }
        }
        Self { matrix: matrix.hermitian_part(), dims, probabilities, vectors }
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn probabilities(&self) -> &[T] {
        &self.probabilities
    }

    pub fn vectors(&self) -> &[Vec<Complex<T>>] {
        &self.vectors
    }

    pub fn purity(&self) -> T {
        self.probabilities.iter().map(|&q| q * q).sum()
    }

    /// `ρ_A ⊗ ρ_B` with dims `(d_A^ρ · d_B^ρ, d_A^σ · d_B^σ)` collapsed to the
    /// two factors.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut probs = Vec::with_capacity(self.dim() * other.dim());
        let mut vectors = Vec::with_capacity(self.dim() * other.dim());
        for (p, u) in self.probabilities.iter().zip(&self.vectors) {
            for (q, v) in other.probabilities.iter().zip(&other.vectors) {
                probs.push(*p * *q);
                vectors.push(u.iter().flat_map(|a| v.iter().map(move |b| a * b)).collect());
            }
        }
        let matrix = self.matrix.kron(&other.matrix);
        let mut pairs: Vec<_> = probs.into_iter().zip(vectors).collect();
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
        let (probabilities, vectors) = pairs.into_iter().unzip();
        Self { matrix, dims: (self.dim(), other.dim()), probabilities, vectors }
    }

    /// Reduced state of the kept subsystem, returned with dims `(d_keep, 1)`.
    pub fn partial_trace(&self, keep: Subsystem) -> Result<Self> {
        let (da, db) = self.dims;
        let out = match keep {
            Subsystem::A => {
                let mut r = ComplexMatrix::zeros(da);
                for i in 0..da {
                    for j in 0..da {
                        r[(i, j)] = (0..db).map(|k| self.matrix[(i * db + k, j * db + k)]).sum();
                    }
                }
                (r, da)
            }
            Subsystem::B => {
                let mut r = ComplexMatrix::zeros(db);
                for k in 0..db {
                    for l in 0..db {
                        r[(k, l)] = (0..da).map(|i| self.matrix[(i * db + k, i * db + l)]).sum();
                    }
                }
                (r, db)
            }
        };
        Self::new(out.0, (out.1, 1))
    }

    /// `(U_A ⊗ 𝕀_B) ρ (U_A ⊗ 𝕀_B)†` with `U_A = e^{-iφH_A}`.
    ///
    /// The cached spectrum is rotated along, so no new diagonalisation happens.
    pub fn evolve(&self, h: &LocalHamiltonian<T>, phi: T) -> Result<Self> {
        if h.dim() != self.dims.0 {
            return Err(Error::DimensionMismatch { expected: self.dims.0, found: h.dim() });
        }
        let u = h.propagator(phi).kron(&ComplexMatrix::identity(self.dims.1));
        Ok(self.conjugate_by(&u))
    }

    /// `U ρ U†` for a unitary on the full space.
    pub fn conjugate_by(&self, u: &ComplexMatrix<T>) -> Self {
        assert_eq!(u.dim(), self.dim());
        Self {
            matrix: self.matrix.conjugate_by(u).hermitian_part(),
            dims: self.dims,
            probabilities: self.probabilities.clone(),
            vectors: self.vectors.iter().map(|v| u.apply(v)).collect(),
        }
    }

    /// Hilbert-Schmidt fidelity `Tr[ρσ] / √(Tr[ρ²] Tr[σ²])`.
    pub fn hs_fidelity(&self, other: &Self) -> Result<T> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        let a = self.matrix.trace_product(&self.matrix).re;
        let b = other.matrix.trace_product(&other.matrix).re;
        if a <= T::zero() || b <= T::zero() {
            return Err(Error::ZeroPurity);
        }
        Ok(self.matrix.trace_product(&other.matrix).re / (a * b).sqrt())
    }

    /// `ρ^{1/2}` from the cached spectrum. Eigenvalues at rounding level are
    /// taken as zero, since the square root would magnify them.
    pub fn sqrt(&self) -> ComplexMatrix<T> {
        let n = self.dim();
        let dust = T::epsilon() * T::lit(64.0);
        let mut out = ComplexMatrix::zeros(n);
        for (q, v) in self.probabilities.iter().zip(&self.vectors) {
            if *q <= dust {
                continue;
            }
            let s = q.sqrt();
            for i in 0..n {
                let vi = v[i].scale(s);
                for j in 0..n {
                    out[(i, j)] += vi * v[j].conj();
                }
            }
        }
        out
    }

    pub fn cast<U: Scalar>(&self) -> Result<DensityMatrix<U>> {
        DensityMatrix::new(self.matrix.cast(), self.dims)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&StateFile::from(self)).expect("state serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: StateFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        file.into_state()
    }
}

/// On-disk form: `{"dims":[dA,dB],"re":[[...]],"im":[[...]]}`.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct StateFile {
    pub dims: [usize; 2],
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl<T: Scalar> From<&DensityMatrix<T>> for StateFile {
    fn from(rho: &DensityMatrix<T>) -> Self {
        let n = rho.dim();
        let m = rho.matrix();
        let rows = |f: fn(&Complex<T>) -> T| -> Vec<Vec<f64>> {
            (0..n).map(|i| m.row(i).iter().map(|z| f(z).as_f64()).collect()).collect()
        };
        StateFile { dims: [rho.dims.0, rho.dims.1], re: rows(|z| z.re), im: rows(|z| z.im) }
    }
}

impl StateFile {
    pub fn into_state<T: Scalar>(self) -> Result<DensityMatrix<T>> {
        let n = self.re.len();
        if self.im.len() != n || self.re.iter().chain(&self.im).any(|r| r.len() != n) {
            return Err(Error::Parse("re/im must be square arrays of equal size".into()));
        }
        let data = self
            .re
            .iter()
            .flatten()
            .zip(self.im.iter().flatten())
            .map(|(&a, &b)| Complex::new(T::lit(a), T::lit(b)))
            .collect();
        DensityMatrix::new(ComplexMatrix::new(n, data)?, (self.dims[0], self.dims[1]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = ComplexMatrix<f64>;
    type D = DensityMatrix<f64>;

    fn ket(bits: &[f64]) -> Vec<Complex<f64>> {
        bits.iter().map(|&x| Complex::new(x, 0.0)).collect()
    }

    fn bell() -> D {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        D::pure(&ket(&[h, 0.0, 0.0, h]), (2, 2)).unwrap()
    }

    #[test]
    fn validation_errors() {
        let not_unit = M::diag(&[0.5, 0.6]);
        assert!(matches!(D::new(not_unit, (2, 1)), Err(Error::NotUnitTrace { .. })));
        let negative = M::diag(&[1.5, -0.5]);
        assert!(matches!(D::new(negative, (2, 1)), Err(Error::NotPositiveSemidefinite { .. })));
        assert!(matches!(D::new(M::identity(4).scale_real(0.25), (2, 3)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn tiny_negative_eigenvalues_are_clamped() {
        let m = M::diag(&[1.0 + 5e-10, -5e-10]);
        let rho = D::new(m, (2, 1)).unwrap();
        assert_eq!(rho.probabilities()[0], 0.0);
        assert!((rho.probabilities()[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn partial_trace_of_product_basis_state() {
        let rho = D::pure(&ket(&[1.0, 0.0, 0.0, 0.0]), (2, 2)).unwrap();
        let a = rho.partial_trace(Subsystem::A).unwrap();
        assert!(a.matrix().max_abs_diff(&M::diag(&[1.0, 0.0])) < 1e-15);
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let a = bell().partial_trace(Subsystem::A).unwrap();
        assert!(a.matrix().max_abs_diff(&M::identity(2).scale_real(0.5)) < 1e-15);
        let b = bell().partial_trace(Subsystem::B).unwrap();
        assert!(b.matrix().max_abs_diff(&M::identity(2).scale_real(0.5)) < 1e-15);
    }

    #[test]
    fn bad_subsystem_label() {
        assert_eq!("C".parse::<Subsystem>(), Err(Error::BadSubsystemLabel("C".into())));
        assert_eq!("B".parse::<Subsystem>(), Ok(Subsystem::B));
    }

    #[test]
    fn evolve_at_zero_phase_is_identity() {
        let h = LocalHamiltonian::from_bloch([1.0, 0.0, 0.0]).unwrap();
        let out = bell().evolve(&h, 0.0).unwrap();
        assert!(out.matrix().max_abs_diff(bell().matrix()) < 1e-15);
    }

    #[test]
    fn evolve_leaves_commuting_state_unchanged() {
        let rho = D::new(M::diag(&[0.1, 0.2, 0.3, 0.4]), (2, 2)).unwrap();
        let h = LocalHamiltonian::from_bloch([0.0, 0.0, 1.0]).unwrap();
        let out = rho.evolve(&h, 1.234).unwrap();
        assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-15);
    }

    #[test]
    fn evolve_rotates_bloch_vector_about_z() {
        // |+⟩⟨+| ⊗ 𝕀/2 under e^{-iπ/4 σ_z}: Bloch vector x → y (rotation by 2φ = π/2).
        let plus = DensityMatrix::new(M::from_real(2, &[0.5, 0.5, 0.5, 0.5]).unwrap(), (2, 1)).unwrap();
        let rho = plus.tensor(&D::maximally_mixed((2, 1)));
        let rho = D::new(rho.matrix().clone(), (2, 2)).unwrap();
        let h = LocalHamiltonian::from_bloch([0.0, 0.0, 1.0]).unwrap();
        let out = rho.evolve(&h, std::f64::consts::FRAC_PI_4).unwrap();
        let a = out.partial_trace(Subsystem::A).unwrap();
        let r: Vec<f64> = (0..3).map(|m| a.matrix().trace_product(&M::pauli(m)).re).collect();
        assert!(r[0].abs() < 1e-15 && (r[1] - 1.0).abs() < 1e-15 && r[2].abs() < 1e-15);
    }

    #[test]
    fn evolve_rejects_wrong_dimension() {
        let h = LocalHamiltonian::from_matrix(M::identity(3)).unwrap();
        assert!(matches!(bell().evolve(&h, 0.1), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn hs_fidelity_examples() {
        let zero = D::pure(&ket(&[1.0, 0.0]), (2, 1)).unwrap();
        let one = D::pure(&ket(&[0.0, 1.0]), (2, 1)).unwrap();
        let mixed = D::maximally_mixed((2, 1));
        assert!((zero.hs_fidelity(&zero).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(zero.hs_fidelity(&one).unwrap(), 0.0);
        assert!((zero.hs_fidelity(&mixed).unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let m = M::from_real(4, &[
            0.3, 0.1, 0.0, 0.05, 0.1, 0.2, 0.0, 0.0, 0.0, 0.0, 0.25, 0.0, 0.05, 0.0, 0.0, 0.25,
        ])
        .unwrap();
        let rho = D::new(m, (2, 2)).unwrap();
        let text = rho.to_json();
        assert!(text.starts_with("{\"dims\":[2,2],\"re\":[["));
        let back = D::from_json(&text).unwrap();
        assert_eq!(back.matrix(), rho.matrix());
        assert_eq!(back.dims(), (2, 2));
    }

    #[test]
    fn json_rejects_ragged_arrays() {
        let text = r#"{"dims":[2,1],"re":[[1,0],[0]],"im":[[0,0],[0,0]]}"#;
        assert!(matches!(D::from_json(text), Err(Error::Parse(_))));
    }
}
