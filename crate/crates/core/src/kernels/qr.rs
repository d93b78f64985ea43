//! Householder QR for tall complex matrices.

use crate::kernels::dense::DenseMatrix;
use crate::kernels::vector::norm2;
use crate::scalar::{cone, czero, creal, Real, C};

/// Thin factorization `A = Q R` with `Q` n×k orthonormal and `R` k×k upper triangular.
#[derive(Clone, Debug)]
pub struct ThinQr<T: Real> {
    pub q: DenseMatrix<T>,
    pub r: DenseMatrix<T>,
}

/// Householder reflector `I − τ v vᴴ` mapping `x` onto a multiple of `e₁`.
/// Returns `(v, τ, β)` with `v[0] = 1` and `(I − τvvᴴ)x = β e₁`.
pub(crate) fn householder<T: Real>(x: &[C<T>]) -> (Vec<C<T>>, C<T>, C<T>) {
    let alpha = x[0];
    let xnorm = norm2(x);
    if xnorm == T::zero() {
        return (vec![czero(); x.len()], czero(), czero());
    }
    let phase = if alpha.norm() == T::zero() { cone() } else { alpha / creal(alpha.norm()) };
    let beta = -phase * creal(xnorm);
    let v0 = alpha - beta;
    let mut v: Vec<C<T>> = x.iter().map(|&xi| xi / v0).collect();
    v[0] = cone();
    // τ = (β − α)/β keeps the reflector unitary for complex α
    let tau = (beta - alpha) / beta;
    (v, tau, beta)
}

pub fn qr_thin<T: Real>(a: &DenseMatrix<T>) -> ThinQr<T> {
    let (n, k) = (a.nrows(), a.ncols());
    assert!(n >= k, "qr_thin needs a tall matrix");
    let mut work = a.clone();
    let mut reflectors: Vec<(Vec<C<T>>, C<T>)> = Vec::with_capacity(k);
    for j in 0..k {
        let x: Vec<C<T>> = work.col(j)[j..].to_vec();
        let (v, tau, beta) = householder(&x);
        // apply (I − τ v vᴴ)ᴴ = I − τ̄ v vᴴ from the left to trailing columns
        for c in j..k {
            let col = &mut work.col_mut(c)[j..];
            let s = v.iter().zip(col.iter()).fold(czero(), |acc, (vi, ci)| acc + vi.conj() * ci);
            let f = tau.conj() * s;
            for (ci, vi) in col.iter_mut().zip(&v) {
                *ci -= f * vi;
            }
        }
        if tau != czero() {
            work[(j, j)] = beta;
            for i in j + 1..n {
                work[(i, j)] = czero();
            }
        }
        reflectors.push((v, tau));
    }
    let r = DenseMatrix::from_fn(k, k, |i, j| if i <= j { work[(i, j)] } else { czero() });
    // Q = H₀ H₁ … H_{k−1} applied to the first k columns of I
    let mut q = DenseMatrix::from_fn(n, k, |i, j| if i == j { cone() } else { czero() });
    for j in (0..k).rev() {
        let (v, tau) = &reflectors[j];
        for c in 0..k {
            let col = &mut q.col_mut(c)[j..];
            let s = v.iter().zip(col.iter()).fold(czero(), |acc, (vi, ci)| acc + vi.conj() * ci);
            let f = *tau * s;
            for (ci, vi) in col.iter_mut().zip(v) {
                *ci -= f * vi;
            }
        }
    }
    ThinQr { q, r }
}

/// Solves `R x = b` for upper-triangular `R` (leading `b.len()` block).
pub fn solve_upper<T: Real>(r: &DenseMatrix<T>, b: &[C<T>]) -> Vec<C<T>> {
    let k = b.len();
    let mut x = b.to_vec();
    for i in (0..k).rev() {
        let mut s = x[i];
        for j in i + 1..k {
            s -= r[(i, j)] * x[j];
        }
        x[i] = s / r[(i, i)];
    }
    x
}

/// `B R⁻¹` for upper-triangular `R`.
pub fn right_solve_upper<T: Real>(b: &DenseMatrix<T>, r: &DenseMatrix<T>) -> DenseMatrix<T> {
    let k = r.ncols();
    assert_eq!(b.ncols(), k);
    let mut out = DenseMatrix::zeros(b.nrows(), k);
    for j in 0..k {
        let mut col = b.col(j).to_vec();
        for p in 0..j {
            let f = r[(p, j)];
            if f != czero() {
                let src = out.col(p).to_vec();
                crate::kernels::vector::axpy(-f, &src, &mut col);
            }
        }
        let d = r[(j, j)];
        for v in col.iter_mut() {
            *v /= d;
        }
        out.col_mut(j).copy_from_slice(&col);
    }
    out
}

/// Least-squares solution `argmin ‖A y − b‖` through Householder QR.
pub fn qr_least_squares<T: Real>(a: &DenseMatrix<T>, b: &[C<T>]) -> Vec<C<T>> {
    let f = qr_thin(a);
    let qtb = f.q.adjoint_matvec(b);
    solve_upper(&f.r, &qtb)
}
