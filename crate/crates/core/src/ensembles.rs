//! Seeded random ensembles: Haar unitaries and pure states, induced mixed
//! states, classical-quantum states, Bell-diagonal triples and B-side channels.

use num_complex::Complex;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::qmat::{ComplexMatrix, DensityMatrix, Subsystem};
use crate::scalar::Scalar;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent generator for sub-task `stream` of a root seed. Results do not
/// depend on the order in which streams are consumed.
pub fn stream_rng(seed: u64, stream: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Seed for sub-task `stream`, e.g. the noise of one run in a sweep.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    stream_rng(seed, stream).random()
}

fn complex_normal<T: Scalar, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(T::lit(re), T::lit(im))
}

/// Haar-random unit vector in `C^d`.
pub fn haar_vector<T: Scalar, R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<Complex<T>> {
    let v: Vec<Complex<T>> = (0..d).map(|_| complex_normal(rng)).collect();
    let n = crate::qmat::norm(&v);
    v.into_iter().map(|z| z.unscale(n)).collect()
}

/// Haar-random unitary: QR of a complex Ginibre matrix with the phases of
/// `diag(R)` moved into `Q`.
pub fn haar_unitary<T: Scalar, R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix<T> {
    let columns: Vec<Vec<Complex<T>>> = (0..d).map(|_| (0..d).map(|_| complex_normal(rng)).collect()).collect();
    let (q, r_diag) = gram_schmidt(columns);
    let mut u = ComplexMatrix::zeros(d);
    for (j, (col, r)) in q.iter().zip(&r_diag).enumerate() {
        let phase = r / r.norm();
        for i in 0..d {
            u[(i, j)] = col[i] * phase;
        }
    }
    u
}

/// `(G + G†)/2` for a complex Ginibre matrix `G`.
pub fn random_hermitian<T: Scalar, R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix<T> {
    let data = (0..d * d).map(|_| complex_normal(rng)).collect();
    ComplexMatrix::new(d, data).expect("finite entries").hermitian_part()
}

/// Modified Gram-Schmidt with one re-orthogonalisation pass; returns the
/// orthonormal columns and the diagonal of R.
fn gram_schmidt<T: Scalar>(mut cols: Vec<Vec<Complex<T>>>) -> (Vec<Vec<Complex<T>>>, Vec<Complex<T>>) {
    let mut diag = Vec::with_capacity(cols.len());
    for j in 0..cols.len() {
        for _ in 0..2 {
            for k in 0..j {
                let proj = crate::qmat::inner(&cols[k], &cols[j]);
                let (head, tail) = cols.split_at_mut(j);
                for (x, y) in tail[0].iter_mut().zip(&head[k]) {
                    *x -= y * proj;
                }
            }
        }
        let n = crate::qmat::norm(&cols[j]);
        cols[j].iter_mut().for_each(|z| *z = z.unscale(n));
        diag.push(Complex::new(n, T::zero()));
    }
    (cols, diag)
}

pub fn random_pure_state<T: Scalar, R: Rng + ?Sized>(rng: &mut R, dims: (usize, usize)) -> DensityMatrix<T> {
    let psi = haar_vector(rng, dims.0 * dims.1);
    DensityMatrix::pure(&psi, dims).expect("normalised vector")
}

/// Reduced state of a Haar-random pure state on `C^{dA dB} ⊗ C^{env}`; the
/// rank is at most `env`.
pub fn random_mixed_state<T: Scalar, R: Rng + ?Sized>(rng: &mut R, dims: (usize, usize), env: usize) -> DensityMatrix<T> {
    let n = dims.0 * dims.1;
    let psi = haar_vector(rng, n * env);
    let global = DensityMatrix::pure(&psi, (n, env)).expect("normalised vector");
    let reduced = global.partial_trace(Subsystem::A).expect("valid partial trace");
    DensityMatrix::new(reduced.matrix().clone(), dims).expect("reduced state is valid")
}

fn random_simplex<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| -rng.random::<f64>().max(1e-300).ln()).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

/// `Σ_j s_j U_A|j⟩⟨j|U_A† ⊗ χ_j` with Haar `U_A` and random states `χ_j` on B.
/// With `classical_b` the `χ_j` share one random eigenbasis on B.
pub fn random_classical_state<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    dims: (usize, usize),
    classical_b: bool,
) -> DensityMatrix<T> {
    let (da, db) = dims;
    let weights = random_simplex(rng, da);
    let basis_a: ComplexMatrix<T> = haar_unitary(rng, da);
    let basis_b: ComplexMatrix<T> = haar_unitary(rng, db);
    let mut m = ComplexMatrix::zeros(da * db);
    for (j, s) in weights.iter().enumerate() {
        let a = basis_a.column(j);
        let proj_a = ComplexMatrix::outer(&a, &a);
        let chi = if classical_b {
            let probs = random_simplex(rng, db);
            let diag: Vec<T> = probs.iter().map(|&x| T::lit(x)).collect();
            ComplexMatrix::diag(&diag).conjugate_by(&basis_b)
        } else {
            random_mixed_state::<T, R>(rng, (db, 1), db).matrix().clone()
        };
        m = &m + &proj_a.kron(&chi).scale_real(T::lit(*s));
    }
    DensityMatrix::new(m, dims).expect("convex mixture of states")
}

/// Uniform triple in the tetrahedron of valid Bell-diagonal correlations.
pub fn random_bell_triple<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    loop {
        let c = [0; 3].map(|_| rng.random_range(-1.0..1.0));
        let eig = [
            1.0 - c[0] - c[1] - c[2],
            1.0 - c[0] + c[1] + c[2],
            1.0 + c[0] - c[1] + c[2],
            1.0 + c[0] + c[1] - c[2],
        ];
        if eig.iter().all(|&x| x >= 0.0) {
            return c;
        }
    }
}

/// Kraus operators of the single-qubit depolarizing channel
/// `ρ ↦ (1 - p)ρ + p 𝕀/2`.
pub fn depolarizing<T: Scalar>(p: f64) -> Vec<ComplexMatrix<T>> {
    let mut ops = vec![ComplexMatrix::identity(2).scale_real(T::lit((1.0 - 0.75 * p).sqrt()))];
    for m in 0..3 {
        ops.push(ComplexMatrix::pauli(m).scale_real(T::lit((p / 4.0).sqrt())));
    }
    ops
}

pub fn amplitude_damping<T: Scalar>(gamma: f64) -> Vec<ComplexMatrix<T>> {
    vec![
        ComplexMatrix::from_real(2, &[1.0, 0.0, 0.0, (1.0 - gamma).sqrt()]).unwrap(),
        ComplexMatrix::from_real(2, &[0.0, gamma.sqrt(), 0.0, 0.0]).unwrap(),
    ]
}

/// Applies `Σ_k (𝕀 ⊗ K_k) ρ (𝕀 ⊗ K_k)†`.
pub fn apply_on_b<T: Scalar>(rho: &DensityMatrix<T>, kraus: &[ComplexMatrix<T>]) -> DensityMatrix<T> {
    let id = ComplexMatrix::identity(rho.dims().0);
    let mut out = ComplexMatrix::zeros(rho.dim());
    for k in kraus {
        out = &out + &rho.matrix().conjugate_by(&id.kron(k));
    }
    DensityMatrix::new(out, rho.dims()).expect("CPTP image of a state")
}

/// Random local unitary `U_A ⊗ U_B`.
pub fn random_local_unitary<T: Scalar, R: Rng + ?Sized>(rng: &mut R, dims: (usize, usize)) -> ComplexMatrix<T> {
    let ua: ComplexMatrix<T> = haar_unitary(rng, dims.0);
    let ub: ComplexMatrix<T> = haar_unitary(rng, dims.1);
    ua.kron(&ub)
}

/// Re-mixes every degenerate eigenspace of `rho` by a Haar unitary and
/// returns the same state carrying the rotated decomposition.
pub fn remix_degenerate_eigenspaces<T: Scalar, R: Rng + ?Sized>(rng: &mut R, rho: &DensityMatrix<T>, gap: T) -> DensityMatrix<T> {
    let q = rho.probabilities().to_vec();
    let mut vectors = rho.vectors().to_vec();
    let mut start = 0;
    while start < q.len() {
        let mut end = start + 1;
        while end < q.len() && (q[end] - q[start]).abs() < gap {
            end += 1;
        }
        let k = end - start;
        if k > 1 {
            let u: ComplexMatrix<T> = haar_unitary(rng, k);
            let old = vectors[start..end].to_vec();
            for (col, slot) in vectors[start..end].iter_mut().enumerate() {
                let mut v = vec![Complex::zero(); rho.dim()];
                for (row, o) in old.iter().enumerate() {
                    for (x, y) in v.iter_mut().zip(o) {
                        *x += y * u[(row, col)];
                    }
                }
                *slot = v;
            }
        }
        start = end;
    }
    DensityMatrix::from_spectrum(q, vectors, rho.dims()).expect("rotated decomposition of a valid state")
}
