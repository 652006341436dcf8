//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary and then applies the classical real Jacobi rotation, so the update
//! is `A ← G† A G` with `G = diag(1, e^{-iα}) · R(θ)` on the `(p, q)` plane.
//! Jacobi is slower than Householder + QR but delivers eigenvectors that are
//! orthonormal to working precision, which the spectral formulas downstream
//! rely on.

use std::cmp::Ordering;

use num_complex::Complex;
use num_traits::{One, Zero};

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tolerances;

const MAX_SWEEPS: usize = 64;

/// Eigenvalues in ascending order with matching orthonormal eigenvectors.
#[derive(Clone, Debug)]
pub struct Eigen<T: Scalar> {
    pub values: Vec<T>,
    pub vectors: Vec<Vec<Complex<T>>>,
}

impl<T: Scalar> Eigen<T> {
    /// Unitary whose columns are the eigenvectors.
    pub fn unitary(&self) -> ComplexMatrix<T> {
        let n = self.values.len();
        let mut u = ComplexMatrix::zeros(n);
        for (j, v) in self.vectors.iter().enumerate() {
            for i in 0..n {
                u[(i, j)] = v[i];
            }
        }
        u
    }

    /// `Σ_i f(e_i) |v_i⟩⟨v_i|`.
    pub fn map_spectrum(&self, f: impl Fn(T) -> Complex<T>) -> ComplexMatrix<T> {
        let n = self.values.len();
        let mut out = ComplexMatrix::zeros(n);
        for (e, v) in self.values.iter().zip(&self.vectors) {
            let w = f(*e);
            if w.is_zero() {
                continue;
            }
            for i in 0..n {
                let vi = v[i] * w;
                for j in 0..n {
                    out[(i, j)] += vi * v[j].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        self.map_spectrum(|e| Complex::new(e, T::zero()))
    }
}

/// Diagonalises a Hermitian matrix.
///
/// Eigenvalues come back ascending. Inside a cluster whose gaps are below
/// [`tolerances::DEGENERATE_GAP`] the eigenvectors are some orthonormal basis
/// of the eigenspace, ordered by their rounded components so repeated calls
/// agree.
pub fn eig_hermitian<T: Scalar>(m: &ComplexMatrix<T>) -> Result<Eigen<T>> {
    let scale = T::one().max(m.max_abs());
    let deviation = m.hermitian_deviation();
    if deviation > T::tol(tolerances::HERMITIAN) * scale {
        return Err(Error::NonHermitian { deviation: deviation.as_f64() });
    }
    let n = m.dim();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);

    let fro = a.frobenius_norm();
    let target = T::epsilon() * fro;
    let mut converged = n == 1 || fro.is_zero();
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps });
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q, target);
            }
        }
        converged = off_diagonal_norm(&a) <= target;
    }

    let mut pairs: Vec<(T, Vec<Complex<T>>)> =
        (0..n).map(|j| (a[(j, j)].re, v.column(j))).collect();
    sort_pairs(&mut pairs);
    let (values, vectors) = pairs.into_iter().unzip();
    Ok(Eigen { values, vectors })
}

fn off_diagonal_norm<T: Scalar>(a: &ComplexMatrix<T>) -> T {
    let n = a.dim();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn rotate<T: Scalar>(a: &mut ComplexMatrix<T>, v: &mut ComplexMatrix<T>, p: usize, q: usize, target: T) {
    let apq = a[(p, q)];
    let magnitude = apq.norm();
    if magnitude <= target * T::lit(1e-3) || magnitude.is_zero() {
        return;
    }
    let phase = apq / magnitude; // e^{iα}
    let (app, aqq) = (a[(p, p)].re, a[(q, q)].re);
    let two = T::lit(2.0);
    let tau = (aqq - app) / (two * magnitude);
    let t = if tau >= T::zero() {
        T::one() / (tau + (T::one() + tau * tau).sqrt())
    } else {
        -T::one() / (-tau + (T::one() + tau * tau).sqrt())
    };
    let c = T::one() / (T::one() + t * t).sqrt();
    let s = t * c;

    // G restricted to (p, q): [[c, s], [-s e^{-iα}, c e^{-iα}]].
    let g_pp = Complex::new(c, T::zero());
    let g_pq = Complex::new(s, T::zero());
    let g_qp = phase.conj() * (-s);
    let g_qq = phase.conj() * c;

    let n = a.dim();
    // A ← A G (columns p, q)
    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    // A ← G† A (rows p, q)
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = Complex::zero();
    a[(q, p)] = Complex::zero();
    a[(p, p)] = Complex::new(a[(p, p)].re, T::zero());
    a[(q, q)] = Complex::new(a[(q, q)].re, T::zero());
    for k in 0..n {
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}

/// Ascending by value; clusters closer than the degeneracy gap are ordered
/// lexicographically by eigenvector components rounded to 1e-8.
fn sort_pairs<T: Scalar>(pairs: &mut [(T, Vec<Complex<T>>)]) {
    pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap_or(Ordering::Equal));
    let gap = T::tol(tolerances::DEGENERATE_GAP);
    let mut start = 0;
    while start < pairs.len() {
        let mut end = start + 1;
        while end < pairs.len() && pairs[end].0 - pairs[end - 1].0 < gap {
            end += 1;
        }
        if end - start > 1 {
            pairs[start..end].sort_by(|x, y| {
                rounded_key(&x.1)
                    .partial_cmp(&rounded_key(&y.1))
                    .unwrap_or(Ordering::Equal)
                    .then(x.0.partial_cmp(&y.0).unwrap_or(Ordering::Equal))
            });
        }
        start = end;
    }
}

fn rounded_key<T: Scalar>(v: &[Complex<T>]) -> Vec<i64> {
    v.iter()
        .flat_map(|z| [z.re, z.im])
        .map(|x| (x.as_f64() * 1e8).round() as i64)
        .collect()
}

/// Largest `|⟨v_i|v_j⟩ - δ_ij|`.
pub fn orthonormality_defect<T: Scalar>(vectors: &[Vec<Complex<T>>]) -> T {
    let mut worst = T::zero();
    for (i, u) in vectors.iter().enumerate() {
        for (j, w) in vectors.iter().enumerate() {
            let target = if i == j { Complex::one() } else { Complex::zero() };
            worst = worst.max((super::matrix::inner(u, w) - target).norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = ComplexMatrix<f64>;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    /// Equality of eigenvectors up to a global phase.
    fn same_ray(u: &[Complex<f64>], v: &[Complex<f64>]) -> bool {
        (super::super::matrix::inner(u, v).norm() - 1.0).abs() < 1e-12
    }

    #[test]
    fn identity_has_unit_eigenvalues() {
        let e = eig_hermitian(&M::identity(2)).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0]);
        assert!(orthonormality_defect(&e.vectors) < 1e-15);
    }

    #[test]
    fn sigma_z_eigenpairs() {
        let e = eig_hermitian(&M::sigma_z()).unwrap();
        assert_eq!(e.values, vec![-1.0, 1.0]);
        assert!(same_ray(&e.vectors[0], &[c(0.0, 0.0), c(1.0, 0.0)]));
        assert!(same_ray(&e.vectors[1], &[c(1.0, 0.0), c(0.0, 0.0)]));
    }

    #[test]
    fn sigma_x_eigenpairs() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let e = eig_hermitian(&M::sigma_x()).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-15 && (e.values[1] - 1.0).abs() < 1e-15);
        assert!(same_ray(&e.vectors[0], &[c(h, 0.0), c(-h, 0.0)]));
        assert!(same_ray(&e.vectors[1], &[c(h, 0.0), c(h, 0.0)]));
    }

    #[test]
    fn sigma_y_needs_complex_rotation() {
        let e = eig_hermitian(&M::sigma_y()).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(same_ray(&e.vectors[1], &[c(h, 0.0), c(0.0, h)]));
        assert!((e.reconstruct().max_abs_diff(&M::sigma_y())) < 1e-15);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = M::from_real(2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(eig_hermitian(&m), Err(Error::NonHermitian { .. })));
    }

    #[test]
    fn degenerate_cluster_ordering_is_deterministic() {
        let m = M::sigma_x().kron(&M::sigma_x());
        let a = eig_hermitian(&m).unwrap();
        let b = eig_hermitian(&m.clone()).unwrap();
        assert_eq!(a.values, b.values);
        assert_eq!(a.vectors, b.vectors);
    }

    #[test]
    fn single_precision_diagonalises_pauli_sum() {
        let m = ComplexMatrix::<f32>::bloch([0.6, 0.0, 0.8]);
        let e = eig_hermitian(&m).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-5 && (e.values[1] - 1.0).abs() < 1e-5);
    }
}
