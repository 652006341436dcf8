//! Interferometric power for a qubit subsystem A: the closed form through the
//! 3×3 matrix M, the brute-force sphere minimisation it is checked against,
//! and the Bell-diagonal special case.

use num_complex::Complex;
use rayon::prelude::*;

use super::qfi::{pair_weight, spectral_elements};
use crate::error::{Error, Result};
use crate::probes::bell_diagonal_state;
use crate::qmat::{eig_hermitian, ComplexMatrix, DensityMatrix};
use crate::scalar::Scalar;
use crate::tolerances;

/// Real symmetric 3×3 matrix whose quadratic form `nᵀMn` equals `F(ρ; n·σ)/4`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MMatrix<T: Scalar> {
    pub entries: [[T; 3]; 3],
}

impl<T: Scalar> MMatrix<T> {
    pub fn quadratic_form(&self, n: [T; 3]) -> T {
        let mut acc = T::zero();
        for a in 0..3 {
            for b in 0..3 {
                acc += n[a] * self.entries[a][b] * n[b];
            }
        }
        acc
    }

    /// Ascending eigenvalues and the unit eigenvector of the smallest one.
    pub fn spectrum(&self) -> ([T; 3], [T; 3]) {
        let m = ComplexMatrix::new(
            3,
            self.entries.iter().flatten().map(|&x| Complex::new(x, T::zero())).collect(),
        )
        .expect("finite 3x3");
        let e = eig_hermitian(&m).expect("M is symmetric");
        // Eigenvectors of a real symmetric matrix are real up to a phase.
        let v = &e.vectors[0];
        let pivot = v.iter().copied().max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap()).unwrap();
        let phase = pivot.conj() / pivot.norm();
        let mut dir = [T::zero(); 3];
        for (d, z) in dir.iter_mut().zip(v) {
            *d = (z * phase).re;
        }
        ([e.values[0], e.values[1], e.values[2]], dir)
    }

    pub fn smallest_eigenvalue(&self) -> T {
        self.spectrum().0[0]
    }
}

fn require_qubit<T: Scalar>(rho: &DensityMatrix<T>) -> Result<()> {
    match rho.dims().0 {
        2 => Ok(()),
        d => Err(Error::SubsystemANotQubit(d)),
    }
}

/// `⟨ψ_i|σ_m ⊗ 𝕀|ψ_l⟩` for m = x, y, z.
fn pauli_elements<T: Scalar>(rho: &DensityMatrix<T>) -> [ComplexMatrix<T>; 3] {
    let id = ComplexMatrix::identity(rho.dims().1);
    [0, 1, 2].map(|m| spectral_elements(rho, &ComplexMatrix::pauli(m).kron(&id)))
}

/// `M_mn = ½ Σ_{i,l} (q_i-q_l)²/(q_i+q_l) ⟨ψ_i|σ_m⊗𝕀|ψ_l⟩⟨ψ_l|σ_n⊗𝕀|ψ_i⟩`,
/// summed over every ordered pair that survives the rank cutoff.
pub fn m_matrix<T: Scalar>(rho: &DensityMatrix<T>) -> Result<MMatrix<T>> {
    require_qubit(rho)?;
    let elems = pauli_elements(rho);
    let q = rho.probabilities();
    let mut acc = [[Complex::new(T::zero(), T::zero()); 3]; 3];
    for i in 0..q.len() {
        for l in 0..q.len() {
            let Some(w) = pair_weight(q[i], q[l]) else { continue };
            for a in 0..3 {
                for b in 0..3 {
                    acc[a][b] += elems[a][(i, l)] * elems[b][(l, i)] * w;
                }
            }
        }
    }
    let half = T::lit(0.5);
    let mut entries = [[T::zero(); 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            // real by the i ↔ l symmetry; symmetrise away rounding
            entries[a][b] = half * half * (acc[a][b].re + acc[b][a].re);
        }
    }
    Ok(MMatrix { entries })
}

/// Interferometric power `P^A(ρ) = ς_min[M]` for a qubit A.
pub fn ip_closed_form<T: Scalar>(rho: &DensityMatrix<T>) -> Result<T> {
    Ok(m_matrix(rho)?.smallest_eigenvalue().max(T::zero()))
}

/// The Hamiltonian direction attaining the interferometric power.
pub fn worst_case_direction<T: Scalar>(rho: &DensityMatrix<T>) -> Result<[T; 3]> {
    Ok(m_matrix(rho)?.spectrum().1)
}

/// Uniform grid on the sphere: `θ_i = πi/θ_steps` for `i = 0..=θ_steps`
/// (both poles included) and `φ_j = 2πj/φ_steps` for `j < φ_steps`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SphereGrid {
    pub theta_steps: usize,
    pub phi_steps: usize,
}

/// Result of a grid minimisation over the sphere.
#[derive(Clone, Copy, Debug)]
pub struct SphereMinimum<T: Scalar> {
    pub value: T,
    pub theta: T,
    pub phi: T,
    pub direction: [T; 3],
    /// Upper bound on `value - true minimum`.
    pub error_bound: T,
}

impl SphereGrid {
    pub const MIN_STEPS: usize = 64;

    pub fn new(theta_steps: usize, phi_steps: usize) -> Result<Self> {
        for (name, v) in [("theta_steps", theta_steps), ("phi_steps", phi_steps)] {
            if v < Self::MIN_STEPS {
                return Err(Error::ParameterOutOfRange {
                    name,
                    value: v as f64,
                    lo: Self::MIN_STEPS as f64,
                    hi: f64::INFINITY,
                });
            }
        }
        Ok(Self { theta_steps, phi_steps })
    }

    pub fn theta<T: Scalar>(&self, i: usize) -> T {
        T::PI() * T::lit(i as f64) / T::lit(self.theta_steps as f64)
    }

    pub fn phi<T: Scalar>(&self, j: usize) -> T {
        T::TAU() * T::lit(j as f64) / T::lit(self.phi_steps as f64)
    }

    /// Largest distance from any point on the sphere to its nearest node.
    pub fn covering_radius<T: Scalar>(&self) -> T {
        let dt = T::PI() / T::lit(self.theta_steps as f64);
        let dp = T::TAU() / T::lit(self.phi_steps as f64);
        let half = T::lit(0.5);
        ((dt * half).powi(2) + (dp * half).powi(2)).sqrt()
    }

    /// Minimises `f` over the grid. Rows are evaluated in parallel; the
    /// reduction runs in grid order and keeps the lowest index among ties.
    pub fn minimize<T: Scalar, F>(&self, f: F) -> SphereMinimum<T>
    where
        F: Fn([T; 3]) -> T + Sync,
    {
        self.minimize_over(&f, T::zero(), T::PI(), T::zero(), T::TAU())
    }

    pub fn maximize<T: Scalar, F>(&self, f: F) -> SphereMinimum<T>
    where
        F: Fn([T; 3]) -> T + Sync,
    {
        let mut m = self.minimize(|n| -f(n));
        m.value = -m.value;
        m
    }

    /// Grid minimisation followed by `levels` rounds of zooming into the
    /// neighbourhood of the current best node.
    pub fn minimize_refined<T: Scalar, F>(&self, f: F, levels: usize) -> SphereMinimum<T>
    where
        F: Fn([T; 3]) -> T + Sync,
    {
        let mut best = self.minimize(&f);
        let mut dt = T::PI() / T::lit(self.theta_steps as f64);
        let mut dp = T::TAU() / T::lit(self.phi_steps as f64);
        let shrink = T::lit(8.0);
        for _ in 0..levels {
            let local = self.minimize_over(&f, best.theta - dt, best.theta + dt, best.phi - dp, best.phi + dp);
            if local.value <= best.value {
                best = local;
            }
            dt = dt / shrink;
            dp = dp / shrink;
        }
        best
    }

    fn minimize_over<T: Scalar, F>(&self, f: &F, t0: T, t1: T, p0: T, p1: T) -> SphereMinimum<T>
    where
        F: Fn([T; 3]) -> T + Sync,
    {
        let nt = self.theta_steps;
        let np = self.phi_steps;
        let full_phi = (p1 - p0 - T::TAU()).abs() < T::epsilon();
        let phi_den = if full_phi { np } else { np - 1 };
        let tie = T::epsilon() * T::lit(64.0);
        let rows: Vec<(T, T, T)> = (0..=nt)
            .into_par_iter()
            .map(|i| {
                let theta = t0 + (t1 - t0) * T::lit(i as f64) / T::lit(nt as f64);
                let (st, ct) = theta.sin_cos();
                let mut best = (T::infinity(), theta, p0);
                for j in 0..np {
                    let phi = p0 + (p1 - p0) * T::lit(j as f64) / T::lit(phi_den as f64);
                    let (sp, cp) = phi.sin_cos();
                    let v = f([st * cp, st * sp, ct]);
                    if v < best.0 - tie {
                        best = (v, theta, phi);
                    }
                }
                best
            })
            .collect();
        let mut best = rows[0];
        for r in &rows[1..] {
            if r.0 < best.0 - tie {
                best = *r;
            }
        }
        let (value, theta, phi) = best;
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        // Lipschitz bound 2‖M‖₂·r with ‖M‖₂ ≤ Tr M = f(x) + f(y) + f(z) for PSD forms.
        let trace = f([T::one(), T::zero(), T::zero()]) + f([T::zero(), T::one(), T::zero()]) + f([T::zero(), T::zero(), T::one()]);
        let radius = ((t1 - t0) / T::lit(nt as f64)).hypot((p1 - p0) / T::lit(phi_den as f64)) * T::lit(0.5);
        SphereMinimum {
            value,
            theta,
            phi,
            direction: [st * cp, st * sp, ct],
            error_bound: T::lit(2.0) * trace.abs() * radius,
        }
    }
}

/// Brute-force `min_n F(ρ; n·σ)/4` on a sphere grid.
///
/// Each node evaluates the spectral QFI sum directly; only the matrix
/// elements `⟨ψ_i|σ_m⊗𝕀|ψ_l⟩` are precomputed, using linearity in `n`.
pub fn ip_oracle<T: Scalar>(rho: &DensityMatrix<T>, grid: SphereGrid) -> Result<SphereMinimum<T>> {
    require_qubit(rho)?;
    let f = quarter_qfi_on_sphere(rho);
    Ok(grid.minimize(f))
}

/// `n ↦ F(ρ; n·σ)/4` as a closure, for sphere scans.
pub fn quarter_qfi_on_sphere<T: Scalar>(rho: &DensityMatrix<T>) -> impl Fn([T; 3]) -> T + Sync + '_ {
    let elems = pauli_elements(rho);
    let q = rho.probabilities();
    let mut pairs = Vec::new();
    for i in 0..q.len() {
        for l in i + 1..q.len() {
            if let Some(w) = pair_weight(q[i], q[l]) {
                pairs.push((w, [elems[0][(i, l)], elems[1][(i, l)], elems[2][(i, l)]]));
            }
        }
    }
    move |n: [T; 3]| {
        pairs
            .iter()
            .map(|(w, a)| *w * (a[0].scale(n[0]) + a[1].scale(n[1]) + a[2].scale(n[2])).norm_sqr())
            .sum::<T>()
    }
}

/// Bell-diagonal closed form
/// `P = (‖C‖₂² - ‖C‖∞² + 2 det C) / (1 - ‖C‖∞²)` for `C = diag(c1, c2, c3)`.
///
/// Errors with [`Error::DegenerateDenominator`] near pure states; see
/// [`ip_bell_diagonal`] for the version that falls back.
pub fn bell_diagonal_formula<T: Scalar>(c: [T; 3]) -> Result<T> {
    validate_triple(c)?;
    let hs = c.iter().map(|&x| x * x).sum::<T>();
    let op = c.iter().map(|&x| x * x).fold(T::zero(), T::max);
    let det = c[0] * c[1] * c[2];
    let den = T::one() - op;
    if den < T::tol(tolerances::BELL_DENOMINATOR) {
        return Err(Error::DegenerateDenominator(den.as_f64()));
    }
    Ok((hs - op + T::lit(2.0) * det) / den)
}

/// Interferometric power of the Bell-diagonal state with correlations `c`.
pub fn ip_bell_diagonal<T: Scalar>(c1: T, c2: T, c3: T) -> Result<T> {
    match bell_diagonal_formula([c1, c2, c3]) {
        Err(Error::DegenerateDenominator(_)) => ip_closed_form(&bell_diagonal_state([c1, c2, c3])?),
        other => other,
    }
}

fn validate_triple<T: Scalar>(c: [T; 3]) -> Result<()> {
    bell_diagonal_state(c)
        .map(|_| ())
        .map_err(|_| Error::InvalidCorrelationTriple(c[0].as_f64(), c[1].as_f64(), c[2].as_f64()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probes::{make_probe, ProbeFamily};

    #[test]
    fn maximally_mixed_has_zero_m() {
        let m = m_matrix(&DensityMatrix::<f64>::maximally_mixed((2, 2))).unwrap();
        assert!(m.entries.iter().flatten().all(|x| x.abs() < 1e-15));
    }

    #[test]
    fn werner_m_is_scalar() {
        for f in [0.2, 0.5, 0.9] {
            let m = m_matrix(&make_probe::<f64>(&ProbeFamily::Werner(f)).unwrap()).unwrap();
            let expected = 2.0 * f * f / (1.0 + f);
            for a in 0..3 {
                for b in 0..3 {
                    let e = if a == b { expected } else { 0.0 };
                    assert!((m.entries[a][b] - e).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn closed_form_examples() {
        let q = make_probe::<f64>(&ProbeFamily::Q(0.6)).unwrap();
        assert!((ip_closed_form(&q).unwrap() - 0.36).abs() < 1e-12);
        let c = make_probe::<f64>(&ProbeFamily::C(0.6)).unwrap();
        assert!(ip_closed_form(&c).unwrap() < 1e-12);
        let bell = make_probe::<f64>(&ProbeFamily::Werner(1.0)).unwrap();
        assert!((ip_closed_form(&bell).unwrap() - 1.0).abs() < 1e-12);
        let sep = make_probe::<f64>(&ProbeFamily::Separable).unwrap();
        assert!((ip_closed_form(&sep).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn requires_qubit_a() {
        let rho = DensityMatrix::<f64>::maximally_mixed((3, 2));
        assert_eq!(ip_closed_form(&rho), Err(Error::SubsystemANotQubit(3)));
        assert!(matches!(ip_oracle(&rho, SphereGrid::new(64, 64).unwrap()), Err(Error::SubsystemANotQubit(3))));
    }

    #[test]
    fn oracle_worst_directions_for_probes() {
        let grid = SphereGrid::new(180, 360).unwrap();
        let q = make_probe::<f64>(&ProbeFamily::Q(0.8)).unwrap();
        let m = ip_oracle(&q, grid).unwrap();
        assert!((m.value - 0.64).abs() < 1e-12);
        assert!((m.theta - std::f64::consts::FRAC_PI_2).abs() < 1e-12);

        let c = make_probe::<f64>(&ProbeFamily::C(0.8)).unwrap();
        let m = ip_oracle(&c, grid).unwrap();
        assert!(m.value.abs() < 1e-12);
        assert!((m.theta - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        assert_eq!(m.phi, 0.0);

        let mixed = DensityMatrix::<f64>::maximally_mixed((2, 2));
        assert_eq!(ip_oracle(&mixed, grid).unwrap().value, 0.0);
    }

    #[test]
    fn grid_below_minimum_resolution_is_rejected() {
        assert!(SphereGrid::new(32, 128).is_err());
    }

    #[test]
    fn bell_diagonal_examples() {
        assert_eq!(ip_bell_diagonal(0.0, 0.0, 0.0).unwrap(), 0.0);
        for f in [0.1, 0.5, 0.9] {
            let p: f64 = ip_bell_diagonal(f, -f, f).unwrap();
            assert!((p - 2.0 * f * f / (1.0 + f)).abs() < 1e-12);
        }
        // (0.35 - 0.25 + 0.03) / 0.75
        let p: f64 = ip_bell_diagonal(0.5, 0.3, 0.1).unwrap();
        assert!((p - 13.0 / 75.0).abs() < 1e-12);
        let explicit: f64 = ip_closed_form(&bell_diagonal_state([0.5, 0.3, 0.1]).unwrap()).unwrap();
        assert!((p - explicit).abs() < 1e-12);
    }

    #[test]
    fn bell_diagonal_pure_edge_falls_back() {
        assert!(matches!(bell_diagonal_formula([1.0, -1.0, 1.0]), Err(Error::DegenerateDenominator(_))));
        assert!((ip_bell_diagonal(1.0f64, -1.0, 1.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bell_diagonal_rejects_invalid_triple() {
        assert!(matches!(ip_bell_diagonal(1.0, 1.0, 1.0), Err(Error::InvalidCorrelationTriple(..))));
    }
}
