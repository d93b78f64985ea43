//! Dense complex eigensolver: Hessenberg reduction followed by shifted QR
//! to Schur form, with eigenvectors from the triangular factor.

use crate::error::{Error, Result};
use crate::kernels::dense::DenseMatrix;
use crate::kernels::lsq::Givens;
use crate::kernels::qr::householder;
use crate::kernels::vector::norm2;
use crate::scalar::{cone, czero, creal, lit, Real, C};

#[derive(Clone, Debug)]
pub struct Eigen<T: Real> {
    pub values: Vec<C<T>>,
    /// Unit-norm eigenvectors, one per column.
    pub vectors: DenseMatrix<T>,
}

/// Schur decomposition `A = Q T Qᴴ`.
#[derive(Clone, Debug)]
pub struct Schur<T: Real> {
    pub t: DenseMatrix<T>,
    pub q: DenseMatrix<T>,
}

fn reduce_hessenberg<T: Real>(a: &DenseMatrix<T>) -> (DenseMatrix<T>, DenseMatrix<T>) {
    let n = a.nrows();
    let mut h = a.clone();
    let mut q = DenseMatrix::identity(n);
    for k in 0..n.saturating_sub(2) {
        let x: Vec<C<T>> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let (v, tau, _) = householder(&x);
        if tau == czero() {
            continue;
        }
        let off = k + 1;
        // left: H ← (I − τ̄vvᴴ)H
        for c in 0..n {
            let s = (0..v.len()).fold(czero(), |acc, i| acc + v[i].conj() * h[(off + i, c)]);
            let f = tau.conj() * s;
            for i in 0..v.len() {
                h[(off + i, c)] -= f * v[i];
            }
        }
        // right: H ← H(I − τvvᴴ), Q ← Q(I − τvvᴴ)
        for m in [&mut h, &mut q] {
            for r in 0..n {
                let s = (0..v.len()).fold(czero(), |acc, i| acc + m[(r, off + i)] * v[i]);
                let f = tau * s;
                for i in 0..v.len() {
                    m[(r, off + i)] -= f * v[i].conj();
                }
            }
        }
        for i in k + 2..n {
            h[(i, k)] = czero();
        }
    }
    (h, q)
}

/// Eigenvalue of the 2×2 block `[[a, b], [c, d]]` closer to `d`.
fn wilkinson<T: Real>(a: C<T>, b: C<T>, c: C<T>, d: C<T>) -> C<T> {
    let half = creal(lit::<T>(0.5));
    let tr = (a + d) * half;
    let disc = ((a - d) * half * ((a - d) * half) + b * c).sqrt();
    let (l1, l2) = (tr + disc, tr - disc);
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

pub fn schur<T: Real>(a: &DenseMatrix<T>) -> Result<Schur<T>> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "schur needs a square matrix");
    if !a.is_finite() {
        return Err(Error::NonFinite("eigensolver input"));
    }
    let (mut h, mut q) = reduce_hessenberg(a);
    let eps = T::epsilon();
    let anorm = h.norm_fro();
    let max_iter = 60 * n.max(1);
    let mut total = 0usize;
    let mut hi = n.saturating_sub(1);
    let mut iter_here = 0usize;
    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let sub = h[(l, l - 1)].norm();
            let mut scale = h[(l, l)].norm() + h[(l - 1, l - 1)].norm();
            if scale == T::zero() {
                scale = anorm;
            }
            if sub <= eps * scale {
                h[(l, l - 1)] = czero();
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            iter_here = 0;
            continue;
        }
        total += 1;
        iter_here += 1;
        if total > max_iter {
            return Err(Error::EigenNoConvergence { iterations: total });
        }
        let mu = if iter_here % 11 == 10 {
            h[(hi, hi)] + creal(lit::<T>(0.75) * h[(hi, hi - 1)].norm())
        } else {
            wilkinson(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        for i in l..=hi {
            h[(i, i)] -= mu;
        }
        let mut rots = Vec::with_capacity(hi - l);
        for k in l..hi {
            let (g, _) = Givens::zeroing(h[(k, k)], h[(k + 1, k)]);
            for c in k..n {
                let (mut x, mut y) = (h[(k, c)], h[(k + 1, c)]);
                g.apply(&mut x, &mut y);
                h[(k, c)] = x;
                h[(k + 1, c)] = y;
            }
            h[(k + 1, k)] = czero();
            rots.push(g);
        }
        for (idx, k) in (l..hi).enumerate() {
            let g = Givens { c: rots[idx].c, s: rots[idx].s.conj() };
            for r in 0..=(k + 1).min(hi) {
                let (mut x, mut y) = (h[(r, k)], h[(r, k + 1)]);
                g.apply(&mut x, &mut y);
                h[(r, k)] = x;
                h[(r, k + 1)] = y;
            }
            for r in 0..n {
                let (mut x, mut y) = (q[(r, k)], q[(r, k + 1)]);
                g.apply(&mut x, &mut y);
                q[(r, k)] = x;
                q[(r, k + 1)] = y;
            }
        }
        for i in l..=hi {
            h[(i, i)] += mu;
        }
    }
    for j in 0..n {
        for i in j + 1..n {
            h[(i, j)] = czero();
        }
    }
    Ok(Schur { t: h, q })
}

/// Eigenvalues and unit eigenvectors of a general complex matrix.
pub fn eig<T: Real>(a: &DenseMatrix<T>) -> Result<Eigen<T>> {
    let n = a.nrows();
    let Schur { t, q } = schur(a)?;
    let tnorm = t.norm_fro().max(T::min_positive_value());
    let small = T::epsilon() * tnorm;
    let values: Vec<C<T>> = (0..n).map(|i| t[(i, i)]).collect();
    let mut vectors = DenseMatrix::zeros(n, n);
    for k in 0..n {
        let lambda = values[k];
        let mut x = vec![czero(); n];
        x[k] = cone();
        for i in (0..k).rev() {
            let mut s: C<T> = czero();
            for j in i + 1..=k {
                s += t[(i, j)] * x[j];
            }
            let mut d = t[(i, i)] - lambda;
            if d.norm() < small {
                d = creal(small);
            }
            x[i] = -s / d;
        }
        let v = q.matvec(&x);
        let nv = norm2(&v);
        for i in 0..n {
            vectors[(i, k)] = v[i] / creal(nv);
        }
    }
    Ok(Eigen { values, vectors })
}
