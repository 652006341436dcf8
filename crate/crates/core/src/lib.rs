//! Interferometric power, quantum Fisher information and the symmetric
//! logarithmic derivative for bipartite quantum states, together with a
//! simulator of black-box phase estimation.
//!
//! All numerics are generic over [`Scalar`] (`f32` or `f64`); the `*64` and
//! `*32` aliases below fix the precision.

pub mod correlations;
pub mod ensembles;
pub mod error;
pub mod estimation;
pub mod probes;
pub mod qmat;
pub mod scalar;
pub mod tolerances;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use num_complex::Complex;

pub type ComplexMatrix64 = qmat::ComplexMatrix<f64>;
pub type DensityMatrix64 = qmat::DensityMatrix<f64>;
pub type LocalHamiltonian64 = qmat::LocalHamiltonian<f64>;
pub type SldDecomposition64 = correlations::SldDecomposition<f64>;
pub type EstimationRun64 = estimation::EstimationRun<f64>;

pub type ComplexMatrix32 = qmat::ComplexMatrix<f32>;
pub type DensityMatrix32 = qmat::DensityMatrix<f32>;
pub type LocalHamiltonian32 = qmat::LocalHamiltonian<f32>;
pub type SldDecomposition32 = correlations::SldDecomposition<f32>;
pub type EstimationRun32 = estimation::EstimationRun<f32>;
