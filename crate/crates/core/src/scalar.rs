//! Scalar abstraction shared by every numeric module.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Absolute tolerance used by every approximate comparison unless the caller
/// passes its own.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Real floating-point type backing amplitudes and matrix entries.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Tolerance appropriate for the precision of the type.
    fn default_tolerance() -> Self;

    /// Converts an `f64` literal. All literals used in this crate are exactly
    /// representable or rounded the same way as the target type would round them.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable in scalar type")
    }
}

impl Scalar for f64 {
    fn default_tolerance() -> Self {
        DEFAULT_TOLERANCE
    }
}

impl Scalar for f32 {
    // 1e-10 is below f32 resolution.
    fn default_tolerance() -> Self {
        1e-5
    }
}
