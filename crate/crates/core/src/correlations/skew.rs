use super::interferometric::MMatrix;
use super::qfi::check_dims;
use crate::error::{Error, Result};
use crate::qmat::{ComplexMatrix, DensityMatrix, LocalHamiltonian};
use crate::scalar::Scalar;

/// Wigner-Yanase skew information `I = -½ Tr[[ρ^{1/2}, H_A ⊗ 𝕀_B]²]`.
pub fn skew_information<T: Scalar>(rho: &DensityMatrix<T>, h: &LocalHamiltonian<T>) -> Result<T> {
    check_dims(rho, h)?;
    Ok(skew_with_root(&rho.sqrt(), &h.extended(rho.dims().1)))
}

fn skew_with_root<T: Scalar>(root: &ComplexMatrix<T>, op: &ComplexMatrix<T>) -> T {
    let c = root.commutator(op);
    -T::lit(0.5) * c.trace_product(&c).re
}

/// Quadratic form `K` with `I(ρ; n·σ) = nᵀKn`, recovered by polarisation from
/// the skew information along the three axes and the three face diagonals.
pub fn skew_form<T: Scalar>(rho: &DensityMatrix<T>) -> Result<MMatrix<T>> {
    if rho.dims().0 != 2 {
        return Err(Error::SubsystemANotQubit(rho.dims().0));
    }
    let root = rho.sqrt();
    let id = ComplexMatrix::identity(rho.dims().1);
    let along = |n: [T; 3]| skew_with_root(&root, &ComplexMatrix::bloch(n).kron(&id));
    let (o, z) = (T::one(), T::zero());
    let axes = [[o, z, z], [z, o, z], [z, z, o]];
    let diag: Vec<T> = axes.iter().map(|&e| along(e)).collect();
    let s = T::FRAC_1_SQRT_2();
    let mut entries = [[T::zero(); 3]; 3];
    for a in 0..3 {
        entries[a][a] = diag[a];
        for b in a + 1..3 {
            let mut u = [z; 3];
            u[a] = s;
            u[b] = s;
            let off = along(u) - (diag[a] + diag[b]) * T::lit(0.5);
            entries[a][b] = off;
            entries[b][a] = off;
        }
    }
    Ok(MMatrix { entries })
}

/// Local quantum uncertainty: `min_n I(ρ; n·σ)` for a qubit A.
pub fn lqu<T: Scalar>(rho: &DensityMatrix<T>) -> Result<T> {
    Ok(skew_form(rho)?.smallest_eigenvalue().max(T::zero()))
}
