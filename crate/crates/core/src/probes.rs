//! Probe states used in the black-box protocol and their analytic predictions.

use std::fmt;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::qmat::{ComplexMatrix, DensityMatrix, LocalHamiltonian};
use crate::scalar::Scalar;

/// A named probe state together with its parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ProbeFamily {
    /// Discordant iso-purity family, `p ∈ [0, 1]`.
    Q(f64),
    /// Classically correlated iso-purity family, `p ∈ [0, 1]`.
    C(f64),
    /// `f |Φ⁺⟩⟨Φ⁺| + (1 - f) 𝕀/4`, `f ∈ [0, 1]`.
    Werner(f64),
    /// `¼(𝕀 + Σ_i c_i σ_i ⊗ σ_i)`.
    BellDiagonal([f64; 3]),
    /// `(|0⟩⟨0| ⊗ |0⟩⟨0| + |+⟩⟨+| ⊗ |1⟩⟨1|)/2`.
    Separable,
    /// `|Φ⁺⟩⟨Φ⁺|` with `|Φ⁺⟩ = (|00⟩ + |11⟩)/√2`.
    PsiBell,
}

/// The two iso-purity families the experiment compares.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProbeKind {
    Q,
    C,
}

impl ProbeKind {
    pub fn family(self, p: f64) -> ProbeFamily {
        match self {
            ProbeKind::Q => ProbeFamily::Q(p),
            ProbeKind::C => ProbeFamily::C(p),
        }
    }
}

impl fmt::Display for ProbeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProbeKind::Q => "Q",
            ProbeKind::C => "C",
        })
    }
}

impl ProbeFamily {
    /// Parses a CLI label (`Q`, `C`, `werner`, `belldiag`, `sep`, `bell`) with
    /// its parameter list.
    pub fn from_label(label: &str, params: &[f64]) -> Result<Self> {
        let one = |name: &'static str| -> Result<f64> {
            params.first().copied().ok_or(Error::ParameterOutOfRange { name, value: f64::NAN, lo: 0.0, hi: 1.0 })
        };
        let family = match label {
            "Q" | "q" => ProbeFamily::Q(one("p")?),
            "C" | "c" => ProbeFamily::C(one("p")?),
            "werner" => ProbeFamily::Werner(one("f")?),
            "belldiag" => match params {
                [a, b, c] => ProbeFamily::BellDiagonal([*a, *b, *c]),
                _ => return Err(Error::Parse("belldiag needs three correlations c1,c2,c3".into())),
            },
            "sep" => ProbeFamily::Separable,
            "bell" => ProbeFamily::PsiBell,
            other => return Err(Error::UnknownProbe(other.to_owned())),
        };
        Ok(family)
    }

    pub fn label(&self) -> &'static str {
        match self {
            ProbeFamily::Q(_) => "Q",
            ProbeFamily::C(_) => "C",
            ProbeFamily::Werner(_) => "werner",
            ProbeFamily::BellDiagonal(_) => "belldiag",
            ProbeFamily::Separable => "sep",
            ProbeFamily::PsiBell => "bell",
        }
    }

    pub fn kind(&self) -> Option<ProbeKind> {
        match self {
            ProbeFamily::Q(_) => Some(ProbeKind::Q),
            ProbeFamily::C(_) => Some(ProbeKind::C),
            _ => None,
        }
    }

    /// The scalar parameter (`p` or `f`), if the family has one.
    pub fn parameter(&self) -> Option<f64> {
        match *self {
            ProbeFamily::Q(p) | ProbeFamily::C(p) | ProbeFamily::Werner(p) => Some(p),
            _ => None,
        }
    }
}

fn unit_interval(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange { name, value, lo: 0.0, hi: 1.0 })
    }
}

/// Builds the density matrix of a probe family.
pub fn make_probe<T: Scalar>(family: &ProbeFamily) -> Result<DensityMatrix<T>> {
    let m = match *family {
        ProbeFamily::Q(p) => {
            unit_interval("p", p)?;
            let (a, b, c) = ((1.0 + p * p) / 4.0, (1.0 - p * p) / 4.0, p / 2.0);
            #[rustfmt::skip]
            let entries = [
                a,   0.0, 0.0, c,
                0.0, b,   0.0, 0.0,
                0.0, 0.0, b,   0.0,
                c,   0.0, 0.0, a,
            ];
            ComplexMatrix::from_real(4, &entries)?
        }
        ProbeFamily::C(p) => {
            unit_interval("p", p)?;
            let (o, s, l) = (0.25, p * p / 4.0, p / 4.0);
            #[rustfmt::skip]
            let entries = [
                o, s, l, l,
                s, o, l, l,
                l, l, o, s,
                l, l, s, o,
            ];
            ComplexMatrix::from_real(4, &entries)?
        }
        ProbeFamily::Werner(f) => {
            unit_interval("f", f)?;
            let bell = bell_projector::<T>();
            let noise = ComplexMatrix::identity(4).scale_real(T::lit((1.0 - f) / 4.0));
            &bell.scale_real(T::lit(f)) + &noise
        }
        ProbeFamily::BellDiagonal(c) => {
            return bell_diagonal_state([T::lit(c[0]), T::lit(c[1]), T::lit(c[2])]);
        }
        ProbeFamily::Separable => {
            let zero = ComplexMatrix::from_real(2, &[1.0, 0.0, 0.0, 0.0])?;
            let one = ComplexMatrix::from_real(2, &[0.0, 0.0, 0.0, 1.0])?;
            let plus = ComplexMatrix::from_real(2, &[0.5, 0.5, 0.5, 0.5])?;
            (&zero.kron(&zero) + &plus.kron(&one)).scale_real(T::lit(0.5))
        }
        ProbeFamily::PsiBell => bell_projector(),
    };
    DensityMatrix::new(m, (2, 2))
}

fn bell_projector<T: Scalar>() -> ComplexMatrix<T> {
    let h = T::FRAC_1_SQRT_2();
    let z = T::zero();
    let phi: Vec<Complex<T>> = [h, z, z, h].iter().map(|&x| Complex::new(x, z)).collect();
    ComplexMatrix::outer(&phi, &phi)
}

/// `¼(𝕀 + Σ_i c_i σ_i ⊗ σ_i)`; fails with `NotPositiveSemidefinite` outside
/// the tetrahedron of valid triples.
pub fn bell_diagonal_state<T: Scalar>(c: [T; 3]) -> Result<DensityMatrix<T>> {
    let mut m = ComplexMatrix::identity(4);
    for (i, &ci) in c.iter().enumerate() {
        let p = ComplexMatrix::pauli(i);
        m = &m + &p.kron(&p).scale_real(ci);
    }
    DensityMatrix::new(m.scale_real(T::lit(0.25)), (2, 2))
}

/// Black-box generator for setting `k`: σ_z, (σ_x + σ_y)/√2, σ_x.
pub fn black_box_setting<T: Scalar>(k: u8) -> Result<LocalHamiltonian<T>> {
    let (o, z, s) = (T::one(), T::zero(), T::FRAC_1_SQRT_2());
    let n = match k {
        1 => [z, z, o],
        2 => [s, s, z],
        3 => [o, z, z],
        _ => return Err(Error::BadSetting(k)),
    };
    LocalHamiltonian::from_bloch(n)
}

/// Analytic QFI of the iso-purity probes in each black-box setting.
pub fn predicted_qfi(kind: ProbeKind, p: f64, k: u8) -> Result<f64> {
    unit_interval("p", p)?;
    let p2 = p * p;
    Ok(match (kind, k) {
        (_, 1) => 8.0 * p2 / (1.0 + p2),
        (ProbeKind::Q, 2) | (ProbeKind::Q, 3) => 4.0 * p2,
        (ProbeKind::C, 2) => 4.0 * p2 / (1.0 + p2),
        (ProbeKind::C, 3) => 0.0,
        (_, k) => return Err(Error::BadSetting(k)),
    })
}

/// Analytic interferometric power of the iso-purity probes.
pub fn predicted_ip(kind: ProbeKind, p: f64) -> f64 {
    match kind {
        ProbeKind::Q => p * p,
        ProbeKind::C => 0.0,
    }
}

/// Purity parameters `p = cos θ` for a flip-angle sweep given in degrees.
pub fn flip_angle_grid(start_deg: f64, stop_deg: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![cos_deg(start_deg)],
        n => (0..n)
            .map(|i| cos_deg(start_deg + (stop_deg - start_deg) * i as f64 / (n - 1) as f64))
            .collect(),
    }
}

// cos(π/2) is 6e-17 in floating point; the right angle should give p = 0.
fn cos_deg(theta: f64) -> f64 {
    if theta == 90.0 {
        0.0
    } else {
        theta.to_radians().cos().clamp(0.0, 1.0)
    }
}

/// 0° to 90° in 2.5° steps: 37 points.
pub fn default_flip_angle_grid() -> Vec<f64> {
    flip_angle_grid(0.0, 90.0, 37)
}

#[cfg(test)]
mod tests {
    use super::*;

    type D = DensityMatrix<f64>;

    #[test]
    fn q_at_zero_is_maximally_mixed() {
        let rho: D = make_probe(&ProbeFamily::Q(0.0)).unwrap();
        assert!(rho.matrix().max_abs_diff(&ComplexMatrix::identity(4).scale_real(0.25)) < 1e-16);
    }

    #[test]
    fn q_at_one_is_bell_state() {
        let rho: D = make_probe(&ProbeFamily::Q(1.0)).unwrap();
        let bell: D = make_probe(&ProbeFamily::PsiBell).unwrap();
        assert!(rho.matrix().max_abs_diff(bell.matrix()) < 1e-15);
    }

    #[test]
    fn c_at_one_is_plus_plus() {
        let rho: D = make_probe(&ProbeFamily::C(1.0)).unwrap();
        let ones = ComplexMatrix::from_real(4, &[0.25; 16]).unwrap();
        assert!(rho.matrix().max_abs_diff(&ones) < 1e-16);
    }

    #[test]
    fn iso_purity() {
        for p in default_flip_angle_grid() {
            let q: D = make_probe(&ProbeFamily::Q(p)).unwrap();
            let c: D = make_probe(&ProbeFamily::C(p)).unwrap();
            let expected = (1.0 + p * p).powi(2) / 4.0;
            assert!((q.purity() - expected).abs() < 1e-12);
            assert!((c.purity() - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn out_of_range_parameters() {
        assert!(matches!(make_probe::<f64>(&ProbeFamily::Q(1.2)), Err(Error::ParameterOutOfRange { .. })));
        assert!(matches!(make_probe::<f64>(&ProbeFamily::Werner(-0.1)), Err(Error::ParameterOutOfRange { .. })));
        assert!(matches!(
            make_probe::<f64>(&ProbeFamily::BellDiagonal([1.0, 1.0, 1.0])),
            Err(Error::NotPositiveSemidefinite { .. })
        ));
    }

    #[test]
    fn predicted_qfi_examples() {
        assert_eq!(predicted_qfi(ProbeKind::Q, 1.0, 1).unwrap(), 4.0);
        assert_eq!(predicted_qfi(ProbeKind::C, 0.3, 3).unwrap(), 0.0);
        assert_eq!(predicted_qfi(ProbeKind::Q, 0.5, 2).unwrap(), 1.0);
        assert_eq!(predicted_qfi(ProbeKind::Q, 0.5, 4), Err(Error::BadSetting(4)));
    }

    #[test]
    fn settings() {
        let z: LocalHamiltonian<f64> = black_box_setting(1).unwrap();
        assert_eq!(z.matrix(), &ComplexMatrix::sigma_z());
        let x: LocalHamiltonian<f64> = black_box_setting(3).unwrap();
        assert_eq!(x.matrix(), &ComplexMatrix::sigma_x());
        let d: LocalHamiltonian<f64> = black_box_setting(2).unwrap();
        let expected = (&ComplexMatrix::sigma_x() + &ComplexMatrix::sigma_y()).scale_real(std::f64::consts::FRAC_1_SQRT_2);
        assert!(d.matrix().max_abs_diff(&expected) < 1e-16);
        let g = d.spectrum_class();
        assert!((g[0] + 1.0).abs() < 1e-15 && (g[1] - 1.0).abs() < 1e-15);
        assert!(matches!(black_box_setting::<f64>(0), Err(Error::BadSetting(0))));
    }

    #[test]
    fn flip_angle_grid_shape() {
        let g = default_flip_angle_grid();
        assert_eq!(g.len(), 37);
        assert_eq!(g[0], 1.0);
        assert!(g[36].abs() < 1e-15);
        assert!(flip_angle_grid(0.0, 90.0, 0).is_empty());
    }

    #[test]
    fn labels_round_trip() {
        for (label, params) in [("Q", vec![0.3]), ("C", vec![0.3]), ("werner", vec![0.5]), ("belldiag", vec![0.1, 0.2, 0.3]), ("sep", vec![])] {
            assert_eq!(ProbeFamily::from_label(label, &params).unwrap().label(), label);
        }
        assert!(matches!(ProbeFamily::from_label("ghz", &[]), Err(Error::UnknownProbe(_))));
    }
}
