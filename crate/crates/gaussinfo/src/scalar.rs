//! Scalar abstraction: every algorithm in this crate is generic over a
//! real floating-point type.

use num_traits::{FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Scalar types the library computes with (f32, f64). The bounds pull
/// in nalgebra's linear algebra, complex arithmetic over the type, and
/// lossless conversion of f64 constants.
pub trait Real:
    nalgebra::RealField + FloatConst + FromPrimitive + ToPrimitive + NumAssign + Copy
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an f64 constant into the working scalar type.
#[inline]
pub(crate) fn real<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("constant not representable in scalar type")
}

/// Widens a scalar back to f64 for diagnostics and error reports.
#[inline]
pub(crate) fn as_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
