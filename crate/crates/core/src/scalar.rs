//! Real scalar abstraction. All solvers work on `Complex<T>` with `T: Real`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating-point type underlying the complex arithmetic (`f32` or `f64`).
pub trait Real:
    Float
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
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex scalar over `T`.
pub type C<T> = Complex<T>;

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in scalar type")
}

/// A tolerance expressed for double precision, floored at `floor_ulps` machine
/// epsilons so that single precision gets a usable threshold.
#[inline]
pub fn scaled_tol<T: Real>(value_f64: f64, floor_ulps: f64) -> T {
    lit::<T>(value_f64).max(T::epsilon() * lit(floor_ulps))
}

#[inline]
pub fn czero<T: Real>() -> C<T> {
    C::new(T::zero(), T::zero())
}

#[inline]
pub fn cone<T: Real>() -> C<T> {
    C::new(T::one(), T::zero())
}

#[inline]
pub fn creal<T: Real>(re: T) -> C<T> {
    C::new(re, T::zero())
}

/// Converts a complex value into `Complex<f64>` for reporting.
#[inline]
pub fn to_c64<T: Real>(z: C<T>) -> Complex<f64> {
    Complex::new(z.re.to_f64().unwrap_or(f64::NAN), z.im.to_f64().unwrap_or(f64::NAN))
}

#[inline]
pub fn from_c64<T: Real>(z: Complex<f64>) -> C<T> {
    C::new(lit(z.re), lit(z.im))
}

#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
