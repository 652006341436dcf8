//! Numerical thresholds. Values are nominal double-precision sizes; routines
//! read them through [`Scalar::tol`](crate::Scalar::tol).

/// Hermiticity check on input matrices.
pub const HERMITIAN: f64 = 1e-10;
/// `|Tr ρ - 1|` bound for density matrices.
pub const TRACE: f64 = 1e-10;
/// Deviation of a Bloch vector from unit length.
pub const NORM: f64 = 1e-10;
/// Eigenvalues in `[-PSD, 0)` are clamped to zero; anything lower is rejected.
pub const PSD: f64 = 1e-9;
/// Eigen-equation residual.
pub const EIG: f64 = 1e-9;
/// Orthonormality of eigenvectors.
pub const ORTH: f64 = 1e-9;
/// Reconstruction of a matrix from its spectral decomposition.
pub const RECON: f64 = 1e-9;
/// Eigenvalues closer than this are treated as one degenerate cluster.
pub const DEGENERATE_GAP: f64 = 1e-8;
/// Pairs with `q_i + q_l` at or below this are dropped from QFI/M/SLD sums.
pub const RANK_CUTOFF: f64 = 1e-12;
/// Residual of the SLD defining equation and `Tr[ρ L] = 0`.
pub const SLD: f64 = 1e-9;
/// Agreement between closed forms and their spectral counterparts.
pub const CLOSED: f64 = 1e-9;
/// `1 - ‖C‖∞²` below this makes the Bell-diagonal formula fall back to the M-matrix route.
pub const BELL_DENOMINATOR: f64 = 1e-9;
/// QFI, Fisher information, or least-squares range below this means "no information".
pub const FLAT: f64 = 1e-10;
/// Probability normalisation of measured populations.
pub const PROB: f64 = 1e-9;
/// Convergence radius of the adaptive localisation loop.
pub const ADAPT: f64 = 1e-6;
/// Cramér-Rao saturation band for exact populations.
pub const CRAMER_RAO_EXACT: f64 = 1e-6;
/// Cramér-Rao saturation band for noisy populations.
pub const CRAMER_RAO_NOISY: f64 = 0.1;
