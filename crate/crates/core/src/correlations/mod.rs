//! Quantum Fisher information, the symmetric logarithmic derivative and the
//! discord-type measures built from them.

mod interferometric;
mod qfi;
mod skew;
mod sld;

pub use interferometric::{
    bell_diagonal_formula, ip_bell_diagonal, ip_closed_form, ip_oracle, m_matrix, quarter_qfi_on_sphere,
    worst_case_direction, MMatrix, SphereGrid, SphereMinimum,
};
pub use qfi::{qfi, qfi_scaling_check, variance};
pub use skew::{lqu, skew_form, skew_information};
pub use sld::{phase_derivative, sld, SldDecomposition};
