//! Modified Gram-Schmidt with a conditional second pass.

use crate::kernels::dense::DenseMatrix;
use crate::kernels::vector::{axpy, dot, norm2};
use crate::scalar::{czero, lit, Real, C};

/// Measured loss of orthogonality above which a second sweep is performed.
const REORTH_THRESHOLD: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct Orthogonalized<T: Real> {
    pub w_orth: Vec<C<T>>,
    /// One coefficient vector per block, `w = Σ blockᵢ·coeffsᵢ + w_orth`.
    pub coeffs: Vec<Vec<C<T>>>,
    pub reorthogonalized: bool,
}

fn sweep<T: Real>(w: &mut [C<T>], blocks: &[&DenseMatrix<T>], coeffs: &mut [Vec<C<T>>]) {
    for (b, cb) in blocks.iter().zip(coeffs.iter_mut()) {
        for j in 0..b.ncols() {
            let q = b.col(j);
            let h = dot(q, w);
            axpy(-h, q, w);
            cb[j] += h;
        }
    }
}

/// Largest `|qᴴw|/‖w‖` over all basis columns.
fn measured_loss<T: Real>(w: &[C<T>], blocks: &[&DenseMatrix<T>]) -> T {
    let wn = norm2(w);
    if wn == T::zero() {
        return T::zero();
    }
    let mut worst = T::zero();
    for b in blocks {
        for j in 0..b.ncols() {
            worst = worst.max(dot(b.col(j), w).norm());
        }
    }
    worst / wn
}

/// Orthogonalizes `w` against the columns of several orthonormal blocks in turn.
///
/// After the first sweep the remaining overlap `max|qᴴw_orth|/‖w_orth‖` is
/// measured; a second sweep runs when it exceeds `1e-10`. Measuring rather
/// than predicting catches overlap reintroduced through slightly
/// nonorthogonal earlier columns.
pub fn mgs_orthogonalize_blocks<T: Real>(w: &[C<T>], blocks: &[&DenseMatrix<T>]) -> Orthogonalized<T> {
    let mut out = w.to_vec();
    let mut coeffs: Vec<Vec<C<T>>> = blocks.iter().map(|b| vec![czero(); b.ncols()]).collect();
    if norm2(w) == T::zero() {
        return Orthogonalized { w_orth: out, coeffs, reorthogonalized: false };
    }
    sweep(&mut out, blocks, &mut coeffs);
    let reorth = norm2(&out) > T::zero() && measured_loss(&out, blocks) > lit::<T>(REORTH_THRESHOLD);
    if reorth {
        sweep(&mut out, blocks, &mut coeffs);
    }
    Orthogonalized { w_orth: out, coeffs, reorthogonalized: reorth }
}

/// Orthogonalizes `w` against the columns of `basis`; returns `(w_orth, coeffs)`
/// with `w = basis·coeffs + w_orth`.
pub fn mgs_orthogonalize<T: Real>(w: &[C<T>], basis: &DenseMatrix<T>) -> (Vec<C<T>>, Vec<C<T>>) {
    let mut r = mgs_orthogonalize_blocks(w, &[basis]);
    (r.w_orth, r.coeffs.pop().unwrap())
}
