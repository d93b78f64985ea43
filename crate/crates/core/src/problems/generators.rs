//! Synthetic operators and right-hand-side sequences.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::kernels::vector::norm2;
use crate::kernels::{Shift, SparseOperator};
use crate::scalar::{cone, creal, lit, Real, C};

/// `A = (1/κ_c + 10⁻³)I − D`.
pub fn qcd_base_matrix<T: Real>(d: &SparseOperator<T>, kappa_c: T) -> Result<SparseOperator<T>> {
    if !d.is_square() {
        return Err(Error::DimensionMismatch { context: "qcd_base_matrix needs square D", expected: d.nrows(), got: d.ncols() });
    }
    if !(kappa_c > T::zero()) {
        return Err(Error::InvalidArgument(format!("kappa_c must be positive, got {kappa_c}")));
    }
    let alpha = T::one() / kappa_c + lit(1e-3);
    Ok(d.scaled(-cone::<T>()).shifted(Shift::real(alpha)))
}

/// Five-point convection-diffusion stencil on an `nx × nx` grid.
///
/// Diagonal `4`, west/south neighbours `−1 − γ`, east/north `−1 + γ` with
/// `γ = peclet`, the whole matrix multiplied by `e^{iθ}` for `θ = rotation`.
pub fn synthetic_convdiff<T: Real>(nx: usize, peclet: T, rotation: T) -> Result<SparseOperator<T>> {
    if nx < 3 {
        return Err(Error::InvalidArgument(format!("nx must be at least 3, got {nx}")));
    }
    let n = nx * nx;
    let rot = C::new(rotation.cos(), rotation.sin());
    let four = creal(lit::<T>(4.0));
    let back = creal(-T::one() - peclet) * rot;
    let fwd = creal(-T::one() + peclet) * rot;
    let mut trip = Vec::with_capacity(5 * n);
    for y in 0..nx {
        for x in 0..nx {
            let i = y * nx + x;
            if y > 0 {
                trip.push((i, i - nx, back));
            }
            if x > 0 {
                trip.push((i, i - 1, back));
            }
            trip.push((i, i, four * rot));
            if x + 1 < nx {
                trip.push((i, i + 1, fwd));
            }
            if y + 1 < nx {
                trip.push((i, i + nx, fwd));
            }
        }
    }
    SparseOperator::from_triplets(n, n, &trip)
}

/// `b₁ = 1`, `b_i = b_{i−1} + d_i` with `‖d_i‖ = 0.1` along seeded Gaussian directions.
pub fn rhs_sequence<T: Real>(n: usize, count: usize, seed: u64, complex: bool) -> Vec<Vec<C<T>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<Vec<C<T>>> = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    out.push(vec![cone(); n]);
    for _ in 1..count {
        let d: Vec<C<f64>> = (0..n)
            .map(|_| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = if complex { StandardNormal.sample(&mut rng) } else { 0.0 };
                C::new(re, im)
            })
            .collect();
        let scale = 0.1 / norm2(&d);
        let prev = out.last().unwrap();
        let next = prev.iter().zip(&d).map(|(p, di)| p + C::new(lit::<T>(di.re * scale), lit::<T>(di.im * scale))).collect();
        out.push(next);
    }
    out
}
