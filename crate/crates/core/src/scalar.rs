//! Real scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar the linear algebra is written against: `f32` or `f64`.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar convertible to f64")
    }

    /// A tolerance of nominal size `base`, floored at a few hundred ulps of
    /// this type so single precision does not demand double-precision accuracy.
    #[inline]
    fn tol(base: f64) -> Self {
        let floor = 512.0 * Self::epsilon().as_f64();
        Self::lit(base.max(floor))
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_floor_only_bites_in_single_precision() {
        assert_eq!(<f64 as Scalar>::tol(1e-12), 1e-12);
        assert!(<f32 as Scalar>::tol(1e-12) > 1e-5);
    }
}
