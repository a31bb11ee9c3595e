//! Floating-point scalar abstraction shared by the geometric kernels.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, NumAssign};

/// Real scalar used for positions and orientations.
///
/// Implemented for `f32` and `f64`. The associated tolerances are the
/// defaults used when no explicit [`Tolerances`](crate::Tolerances) are given;
/// single precision cannot resolve the double-precision bands, so it gets
/// its own (still `< 1e-3`) defaults.
pub trait Scalar:
    Float + FloatConst + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
    /// Default distance / unit-norm tolerance.
    const DEFAULT_EPS: f64;
    /// Tolerance for comparing measured angles against exact multiples of pi/3.
    const ANGLE_TOL: f64;

    /// Converts an `f64` literal into this scalar.
    #[inline]
    fn lit(x: f64) -> Self {
        <Self as num_traits::NumCast>::from(x).expect("f64 literal representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar representable as f64")
    }

    /// sqrt(3)/2, the critical cone parameter.
    #[inline]
    fn sqrt3_2() -> Self {
        Self::lit(3.0).sqrt() / Self::lit(2.0)
    }
}

impl Scalar for f64 {
    const DEFAULT_EPS: f64 = 1e-9;
    const ANGLE_TOL: f64 = 1e-7;
}

impl Scalar for f32 {
    const DEFAULT_EPS: f64 = 1e-4;
    const ANGLE_TOL: f64 = 1e-3;
}
