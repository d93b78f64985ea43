//! Small dense Hermitian positive (semi)definite solves.

use crate::error::{Error, Result};
use crate::kernels::dense::DenseMatrix;
use crate::scalar::{creal, lit, to_f64, Real, C};

fn singular<T: Real>(max_pivot: T, min_pivot: T) -> Error {
    let condition = if min_pivot > T::zero() { to_f64(max_pivot / min_pivot) } else { f64::INFINITY };
    Error::Singular { condition }
}

/// Pivots below a few rounding units of the largest diagonal entry are
/// indistinguishable from zero.
fn pivot_floor<T: Real>(n: usize, scale: T) -> T {
    T::epsilon() * lit(4.0 * n.max(1) as f64) * scale
}

fn diag_scale<T: Real>(a: &DenseMatrix<T>) -> T {
    (0..a.nrows()).map(|i| a[(i, i)].re.abs()).fold(T::zero(), T::max)
}

/// Solves `N y = rhs` for Hermitian `N`. Tries Cholesky first and falls back
/// to LDLᴴ with symmetric diagonal pivoting when a nonpositive pivot appears.
pub fn hermitian_solve<T: Real>(n_mat: &DenseMatrix<T>, rhs: &[C<T>]) -> Result<Vec<C<T>>> {
    let n = n_mat.nrows();
    if n_mat.ncols() != n {
        return Err(Error::DimensionMismatch { context: "hermitian_solve matrix", expected: n, got: n_mat.ncols() });
    }
    if rhs.len() != n {
        return Err(Error::DimensionMismatch { context: "hermitian_solve rhs", expected: n, got: rhs.len() });
    }
    if !n_mat.is_finite() {
        return Err(Error::NonFinite("hermitian_solve matrix"));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    match cholesky(n_mat) {
        Some(l) => cholesky_solve(&l, rhs, diag_scale(n_mat)),
        None => ldl_solve(n_mat, rhs),
    }
}

/// Lower Cholesky factor, or `None` at the first nonpositive pivot.
fn cholesky<T: Real>(a: &DenseMatrix<T>) -> Option<DenseMatrix<T>> {
    let n = a.nrows();
    let mut l = DenseMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)].re;
        for p in 0..j {
            d -= l[(j, p)].norm_sqr();
        }
        if !(d > T::zero()) {
            return None;
        }
        let ljj = d.sqrt();
        l[(j, j)] = creal(ljj);
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for p in 0..j {
                s -= l[(i, p)] * l[(j, p)].conj();
            }
            l[(i, j)] = s / creal(ljj);
        }
    }
    Some(l)
}

fn cholesky_solve<T: Real>(l: &DenseMatrix<T>, rhs: &[C<T>], scale: T) -> Result<Vec<C<T>>> {
    let n = l.nrows();
    let mn = (0..n).map(|i| l[(i, i)].re * l[(i, i)].re).fold(T::infinity(), T::min);
    if mn <= pivot_floor(n, scale) {
        return Err(singular(scale, mn));
    }
    let mut y = rhs.to_vec();
    for i in 0..n {
        let mut s = y[i];
        for p in 0..i {
            s -= l[(i, p)] * y[p];
        }
        y[i] = s / l[(i, i)];
    }
    for i in (0..n).rev() {
        let mut s = y[i];
        for p in i + 1..n {
            s -= l[(p, i)].conj() * y[p];
        }
        y[i] = s / l[(i, i)];
    }
    Ok(y)
}

/// `P N Pᵀ = L D Lᴴ` with 1×1 pivots chosen by largest remaining diagonal modulus.
fn ldl_solve<T: Real>(a: &DenseMatrix<T>, rhs: &[C<T>]) -> Result<Vec<C<T>>> {
    let n = a.nrows();
    let mut w = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut d = vec![T::zero(); n];
    let scale = diag_scale(a);
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| w[(i, i)].re.abs().partial_cmp(&w[(j, j)].re.abs()).unwrap()).unwrap();
        if p != k {
            perm.swap(k, p);
            for c in 0..n {
                let t = w[(k, c)];
                w[(k, c)] = w[(p, c)];
                w[(p, c)] = t;
            }
            for r in 0..n {
                let t = w[(r, k)];
                w[(r, k)] = w[(r, p)];
                w[(r, p)] = t;
            }
        }
        let dk = w[(k, k)].re;
        if dk.abs() <= pivot_floor(n, scale) {
            let mn = d[..k].iter().map(|x| x.abs()).fold(dk.abs(), T::min);
            return Err(singular(scale, mn));
        }
        d[k] = dk;
        for i in k + 1..n {
            w[(i, k)] = w[(i, k)] / creal(dk);
        }
        for j in k + 1..n {
            let ljk = w[(j, k)];
            for i in j..n {
                let lik = w[(i, k)];
                let upd = lik * creal(dk) * ljk.conj();
                w[(i, j)] -= upd;
                if i != j {
                    w[(j, i)] = w[(i, j)].conj();
                }
            }
            w[(j, j)] = creal(w[(j, j)].re);
        }
    }
    let mut y: Vec<C<T>> = perm.iter().map(|&i| rhs[i]).collect();
    for i in 0..n {
        let mut s = y[i];
        for p in 0..i {
            s -= w[(i, p)] * y[p];
        }
        y[i] = s;
    }
    for i in 0..n {
        y[i] = y[i] / creal(d[i]);
    }
    for i in (0..n).rev() {
        let mut s = y[i];
        for p in i + 1..n {
            s -= w[(p, i)].conj() * y[p];
        }
        y[i] = s;
    }
    let mut out = y.clone();
    for (k, &i) in perm.iter().enumerate() {
        out[i] = y[k];
    }
    Ok(out)
}
