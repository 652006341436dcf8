//! Dense complex linear algebra and quantum-state primitives.

mod density;
mod eigen;
mod hamiltonian;
mod matrix;

pub use density::{DensityMatrix, StateFile, Subsystem};
pub use eigen::{eig_hermitian, orthonormality_defect, Eigen};
pub use hamiltonian::LocalHamiltonian;
pub use matrix::{inner, norm, ComplexMatrix};
