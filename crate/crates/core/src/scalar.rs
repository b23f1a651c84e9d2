//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point type usable by the solvers: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Conversion from a small unsigned integer.
    fn from_u32_exact(n: u32) -> Self {
        Self::from_u32(n).expect("u32 representable")
    }

    /// Conversion from a signed integer (charges, couplings).
    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("i64 representable")
    }

    /// `tol`, raised to `ulps` machine epsilons where the type is too coarse
    /// to resolve it.
    fn tolerance(tol: f64, ulps: f64) -> Self {
        Self::lit(tol).max(Self::epsilon() * Self::lit(ulps))
    }
}

impl Real for f32 {}
impl Real for f64 {}
