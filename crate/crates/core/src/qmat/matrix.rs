use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix<T: Scalar> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Scalar> ComplexMatrix<T> {
    pub fn new(dim: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::NotSquare { dim, entries: data.len() });
        }
        if let Some(k) = data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite { row: k / dim, col: k % dim });
        }
        Ok(Self { dim, data })
    }

    /// Builds a matrix from real row-major `f64` entries.
    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        Self::new(dim, entries.iter().map(|&x| Complex::new(T::lit(x), T::zero())).collect())
    }

    pub fn from_rows(rows: &[Vec<Complex<T>>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::NotSquare { dim, entries: rows.iter().map(Vec::len).sum() });
        }
        Self::new(dim, rows.concat())
    }

    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![Complex::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex::one();
        }
        m
    }

    pub fn diag(values: &[T]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex::new(v, T::zero());
        }
        m
    }

    /// `|u⟩⟨v|`.
    pub fn outer(u: &[Complex<T>], v: &[Complex<T>]) -> Self {
        assert_eq!(u.len(), v.len());
        let dim = u.len();
        let mut data = Vec::with_capacity(dim * dim);
        for a in u {
            for b in v {
                data.push(a * b.conj());
            }
        }
        Self { dim, data }
    }

    /// Pauli matrix by index: 0 → σ_x, 1 → σ_y, 2 → σ_z.
    pub fn pauli(axis: usize) -> Self {
        let (o, z, i) = (Complex::one(), Complex::zero(), Complex::i());
        let data = match axis {
            0 => vec![z, o, o, z],
            1 => vec![z, -i, i, z],
            2 => vec![o, z, z, -o],
            _ => panic!("Pauli axis {axis} out of range"),
        };
        Self { dim: 2, data }
    }

    pub fn sigma_x() -> Self {
        Self::pauli(0)
    }

    pub fn sigma_y() -> Self {
        Self::pauli(1)
    }

    pub fn sigma_z() -> Self {
        Self::pauli(2)
    }

    /// `n_x σ_x + n_y σ_y + n_z σ_z`.
    pub fn bloch(n: [T; 3]) -> Self {
        (0..3).fold(Self::zeros(2), |acc, m| &acc + &Self::pauli(m).scale_real(n[m]))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex<T>] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn scale_real(&self, s: T) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z.scale(s)).collect() }
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// `Tr[self · other]` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex<T> {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut acc = Complex::zero();
        for i in 0..n {
            for k in 0..n {
                acc += self[(i, k)] * other[(k, i)];
            }
        }
        acc
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    /// Largest entrywise deviation from Hermiticity, `max |m_ij - conj(m_ji)|`.
    pub fn hermitian_deviation(&self) -> T {
        let n = self.dim;
        let mut worst = T::zero();
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `(m + m†)/2`.
    pub fn hermitian_part(&self) -> Self {
        let half = T::lit(0.5);
        (self + &self.adjoint()).scale_real(half)
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// Kronecker product; entry `(i·d_b + k, j·d_b + l) = a_ij · b_kl`.
    pub fn kron(&self, other: &Self) -> Self {
        let (da, db) = (self.dim, other.dim);
        let n = da * db;
        let mut out = Self::zeros(n);
        for i in 0..da {
            for j in 0..da {
                let a = self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..db {
                    for l in 0..db {
                        out[(i * db + k, j * db + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `⟨u|self|v⟩`.
    pub fn braket(&self, u: &[Complex<T>], v: &[Complex<T>]) -> Complex<T> {
        inner(u, &self.apply(v))
    }

    /// `U · self · U†`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        &(u * self) * &u.adjoint()
    }

    /// Largest entrywise difference to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    /// Converts the scalar type.
    pub fn cast<U: Scalar>(&self) -> ComplexMatrix<U> {
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .map(|z| Complex::new(U::lit(z.re.as_f64()), U::lit(z.im.as_f64())))
                .collect(),
        }
    }
}

/// `⟨u|v⟩`, antilinear in the first argument.
pub fn inner<T: Scalar>(u: &[Complex<T>], v: &[Complex<T>]) -> Complex<T> {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm<T: Scalar>(v: &[Complex<T>]) -> T {
    v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

impl<T: Scalar> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.dim + j]
    }
}

impl<T: Scalar> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.dim + j]
    }
}

impl<T: Scalar> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn mul(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "matrix product dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl<T: Scalar> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn add(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!(self.dim, rhs.dim);
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<T: Scalar> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn sub(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!(self.dim, rhs.dim);
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<T: Scalar> fmt::Debug for ComplexMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = self
                .row(i)
                .iter()
                .map(|z| format!("{:+.6}{:+.6}i", z.re, z.im))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = ComplexMatrix<f64>;

    #[test]
    fn rejects_non_square_and_non_finite() {
        assert!(matches!(M::new(2, vec![Complex::zero(); 3]), Err(Error::NotSquare { .. })));
        let mut data = vec![Complex::zero(); 4];
        data[3] = Complex::new(f64::NAN, 0.0);
        assert_eq!(M::new(2, data), Err(Error::NonFinite { row: 1, col: 1 }));
    }

    #[test]
    fn sigma_z_tensor_identity_is_diagonal() {
        let m = M::sigma_z().kron(&M::identity(2));
        assert_eq!(m, M::diag(&[1.0, 1.0, -1.0, -1.0]));
    }

    #[test]
    fn identity_tensor_identity() {
        assert_eq!(M::identity(2).kron(&M::identity(2)), M::identity(4));
    }

    #[test]
    fn sigma_x_tensor_sigma_x_is_antidiagonal() {
        let m = M::sigma_x().kron(&M::sigma_x());
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i + j == 3 { 1.0 } else { 0.0 };
                assert_eq!(m[(i, j)], Complex::new(expected, 0.0));
            }
        }
    }

    #[test]
    fn pauli_algebra() {
        let (x, y, z) = (M::sigma_x(), M::sigma_y(), M::sigma_z());
        assert_eq!(&x * &x, M::identity(2));
        assert_eq!(&x * &y, z.scale(Complex::i()));
        assert_eq!(x.commutator(&y), z.scale(Complex::new(0.0, 2.0)));
        for p in [&x, &y, &z] {
            assert_eq!(p.hermitian_deviation(), 0.0);
            assert_eq!(p.trace(), Complex::zero());
        }
    }

    #[test]
    fn bloch_matrix_of_axis_is_pauli() {
        assert_eq!(M::bloch([0.0, 0.0, 1.0]), M::sigma_z());
        assert_eq!(M::bloch([1.0, 0.0, 0.0]), M::sigma_x());
    }

    #[test]
    fn trace_product_matches_full_product() {
        let a = M::sigma_x().kron(&M::sigma_y());
        let b = M::sigma_x().kron(&M::sigma_y()).scale_real(0.5);
        assert_eq!(a.trace_product(&b), (&a * &b).trace());
    }
}
