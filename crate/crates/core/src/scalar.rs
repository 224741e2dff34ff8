use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar the whole crate is generic over.
///
/// Everything numerical (matrices, flows, measures) works for any type
/// implementing this trait; `f64` is the intended precision and the one the
/// documented tolerances refer to. `f32` is supported for size/speed
/// trade-offs, with iteration thresholds that scale with `Scalar::epsilon`.
pub trait Scalar: Float + FromPrimitive + Sum + Debug + Display + 'static {
    /// Shorthand for converting an `f64` constant into `Self`.
    fn of(x: f64) -> Self;
}

impl Scalar for f64 {
    #[inline]
    fn of(x: f64) -> Self {
        x
    }
}

impl Scalar for f32 {
    #[inline]
    fn of(x: f64) -> Self {
        x as f32
    }
}

/// ln 2 in the scalar type, used for base-2 entropies.
#[inline]
pub(crate) fn ln_2<F: Scalar>() -> F {
    F::of(2.0).ln()
}
