//! Floating point abstraction shared by every estimator.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar the library computes in: `f32` or `f64`.
///
/// All spectra, likelihoods and bounds are generic over this trait. Tolerances
/// that the `f64` path pins to absolute values (1e-12 clamps, 1e-14 bisection
/// margins) are expressed through [`Scalar::tol`], which never goes below a few
/// ulps of the concrete type.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal, panicking only on values no float can hold.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(k: usize) -> Self {
        Self::from_usize(k).expect("usize representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// `max(x, 16 eps)`: an absolute tolerance that stays meaningful in `f32`.
    #[inline]
    fn tol(x: f64) -> Self {
        let floor = Self::epsilon() * Self::lit(16.0);
        Self::lit(x).max(floor)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
