use num_complex::Complex;
use num_traits::Zero;

use super::eigen::{eig_hermitian, Eigen};
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tolerances;

/// Hermitian generator acting on subsystem A.
///
/// The eigendecomposition is computed once at construction; its eigenvalues
/// are the spectrum class Γ and it also drives the exact exponential used by
/// [`evolve`](super::DensityMatrix::evolve).
#[derive(Clone, Debug)]
pub struct LocalHamiltonian<T: Scalar> {
    matrix: ComplexMatrix<T>,
    eigen: Eigen<T>,
    bloch: Option<[T; 3]>,
}

impl<T: Scalar> LocalHamiltonian<T> {
    pub fn from_matrix(matrix: ComplexMatrix<T>) -> Result<Self> {
        let eigen = eig_hermitian(&matrix)?;
        Ok(Self { matrix: matrix.hermitian_part(), eigen, bloch: None })
    }

    /// `n · σ` for a unit Bloch vector `n`.
    pub fn from_bloch(n: [T; 3]) -> Result<Self> {
        let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        if (norm - T::one()).abs() > T::tol(tolerances::NORM) {
            return Err(Error::NotUnitVector { norm: norm.as_f64() });
        }
        let mut h = Self::from_matrix(ComplexMatrix::bloch(n))?;
        h.bloch = Some(n);
        Ok(h)
    }

    /// `n · σ` with `n = (sin θ cos φ, sin θ sin φ, cos θ)`.
    pub fn from_angles(theta: T, phi: T) -> Self {
        let n = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
        Self::from_bloch(n).expect("spherical coordinates give a unit vector")
    }

    /// `a·H + b·𝕀`.
    pub fn affine(&self, a: T, b: T) -> Self {
        let shifted = &self.matrix.scale_real(a) + &ComplexMatrix::identity(self.dim()).scale_real(b);
        Self::from_matrix(shifted).expect("affine image of a Hermitian matrix is Hermitian")
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    /// Ordered eigenvalues Γ.
    pub fn spectrum_class(&self) -> &[T] {
        &self.eigen.values
    }

    pub fn bloch_vector(&self) -> Option<[T; 3]> {
        self.bloch
    }

    pub fn eigen(&self) -> &Eigen<T> {
        &self.eigen
    }

    /// `e^{-iφH}` built from the spectral decomposition.
    pub fn propagator(&self, phi: T) -> ComplexMatrix<T> {
        self.eigen.map_spectrum(|e| {
            let angle = -phi * e;
            Complex::new(angle.cos(), angle.sin())
        })
    }

    /// `H ⊗ 𝕀_B`.
    pub fn extended(&self, dim_b: usize) -> ComplexMatrix<T> {
        self.matrix.kron(&ComplexMatrix::identity(dim_b))
    }

    pub fn is_traceless(&self) -> bool {
        self.matrix.trace().is_zero()
    }
}
