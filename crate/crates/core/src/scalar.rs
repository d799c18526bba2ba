use std::fmt::Debug;

use num_traits::{Float, FloatConst, FromPrimitive, Num, ToPrimitive};

/// Field-like scalar: enough arithmetic for the closed-form moment formulas.
///
/// Implemented for `f32`, `f64` and exact rationals such as
/// `num_rational::Ratio<i128>`.
pub trait Scalar: Num + Copy + PartialOrd + FromPrimitive + Debug {
    fn from_count(k: u64) -> Self {
        Self::from_u64(k).expect("count representable in scalar type")
    }
}

impl<T> Scalar for T where T: Num + Copy + PartialOrd + FromPrimitive + Debug {}

/// Floating-point scalar used wherever a square root, exponential or
/// logarithm is needed.
pub trait Real: Scalar + Float + FloatConst + ToPrimitive {
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in float type")
    }
}

impl<T> Real for T where T: Scalar + Float + FloatConst + ToPrimitive {}
