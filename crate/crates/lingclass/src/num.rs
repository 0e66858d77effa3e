use std::fmt;

use num_traits::{Float, FromPrimitive};

/// Scalar type for the floating-point math in this crate.
///
/// Satisfied by `f32` and `f64`; everything downstream of the soundex
/// embedding is generic over it.
pub trait Real: Float + FromPrimitive + fmt::Debug + fmt::Display + Copy + 'static {}

impl<T> Real for T where T: Float + FromPrimitive + fmt::Debug + fmt::Display + Copy + 'static {}

pub(crate) fn real<F: Real>(x: f64) -> F {
    F::from_f64(x).expect("f64 converts into any Real")
}

pub(crate) fn real_usize<F: Real>(n: usize) -> F {
    F::from_usize(n).expect("usize converts into any Real")
}
