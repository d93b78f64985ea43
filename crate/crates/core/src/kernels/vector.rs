//! Dense complex vector helpers.

use crate::scalar::{czero, Real, C};

/// `xᴴ y` (conjugate-linear in the first argument).
#[inline]
pub fn dot<T: Real>(x: &[C<T>], y: &[C<T>]) -> C<T> {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y).fold(czero(), |acc, (a, b)| acc + a.conj() * b)
}

#[inline]
pub fn norm2<T: Real>(x: &[C<T>]) -> T {
    // scaled accumulation avoids overflow for the residual magnitudes seen here
    let scale = x.iter().fold(T::zero(), |m, z| m.max(z.re.abs()).max(z.im.abs()));
    if scale == T::zero() {
        return T::zero();
    }
    let s: T = x
        .iter()
        .map(|z| {
            let (a, b) = (z.re / scale, z.im / scale);
            a * a + b * b
        })
        .sum();
    scale * s.sqrt()
}

/// `y ← y + α x`
#[inline]
pub fn axpy<T: Real>(alpha: C<T>, x: &[C<T>], y: &mut [C<T>]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

#[inline]
pub fn scale<T: Real>(alpha: C<T>, x: &mut [C<T>]) {
    for xi in x.iter_mut() {
        *xi *= alpha;
    }
}

pub fn sub<T: Real>(x: &[C<T>], y: &[C<T>]) -> Vec<C<T>> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

pub fn add<T: Real>(x: &[C<T>], y: &[C<T>]) -> Vec<C<T>> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

pub fn is_finite<T: Real>(x: &[C<T>]) -> bool {
    x.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn max_abs<T: Real>(x: &[C<T>]) -> T {
    x.iter().fold(T::zero(), |m, z| m.max(z.norm()))
}
