//! Hessenberg least squares through Givens rotations.

use crate::kernels::dense::DenseMatrix;
use crate::scalar::{czero, creal, lit, Real, C};

/// Complex plane rotation `[c s; −s̄ c]` with real `c`.
#[derive(Clone, Copy, Debug)]
pub struct Givens<T: Real> {
    pub c: T,
    pub s: C<T>,
}

impl<T: Real> Givens<T> {
    /// Rotation mapping `(a, b)` to `(r, 0)`; returns it together with `r`.
    pub fn zeroing(a: C<T>, b: C<T>) -> (Self, C<T>) {
        let (na, nb) = (a.norm(), b.norm());
        if nb == T::zero() {
            return (Givens { c: T::one(), s: czero() }, a);
        }
        if na == T::zero() {
            return (Givens { c: T::zero(), s: b.conj() / creal(nb) }, creal(nb));
        }
        let nu = na.hypot(nb);
        let phase = a / creal(na);
        let g = Givens { c: na / nu, s: phase * b.conj() / creal(nu) };
        (g, phase * creal(nu))
    }

    #[inline]
    pub fn apply(&self, x: &mut C<T>, y: &mut C<T>) {
        let (a, b) = (*x, *y);
        *x = creal(self.c) * a + self.s * b;
        *y = -self.s.conj() * a + creal(self.c) * b;
    }
}

/// Incrementally built `min ‖H̄ y − β e₁‖` for a growing upper-Hessenberg `H̄`.
#[derive(Clone, Debug)]
pub struct HessenbergLsq<T: Real> {
    rotations: Vec<Givens<T>>,
    /// Triangular factor, column by column.
    r: DenseMatrix<T>,
    /// Rotated right-hand side; length `columns + 1`.
    g: Vec<C<T>>,
    capacity: usize,
}

impl<T: Real> HessenbergLsq<T> {
    pub fn new(beta: C<T>, capacity: usize) -> Self {
        let mut g = vec![czero(); capacity + 1];
        g[0] = beta;
        HessenbergLsq { rotations: Vec::with_capacity(capacity), r: DenseMatrix::zeros(capacity, capacity), g, capacity }
    }

    /// Starts from a general first-column right-hand side (length `capacity + 1`).
    pub fn with_rhs(rhs: &[C<T>], capacity: usize) -> Self {
        assert_eq!(rhs.len(), capacity + 1);
        HessenbergLsq { rotations: Vec::with_capacity(capacity), r: DenseMatrix::zeros(capacity, capacity), g: rhs.to_vec(), capacity }
    }

    pub fn columns(&self) -> usize {
        self.rotations.len()
    }

    /// Appends Hessenberg column `h` (length `j + 2` for column index `j`) and
    /// returns the updated residual norm.
    pub fn push_column(&mut self, h: &[C<T>]) -> T {
        let j = self.rotations.len();
        assert!(j < self.capacity, "least-squares capacity exceeded");
        assert_eq!(h.len(), j + 2, "Hessenberg column length");
        let mut col = h.to_vec();
        for (i, rot) in self.rotations.iter().enumerate() {
            let (mut a, mut b) = (col[i], col[i + 1]);
            rot.apply(&mut a, &mut b);
            col[i] = a;
            col[i + 1] = b;
        }
        let (rot, rjj) = Givens::zeroing(col[j], col[j + 1]);
        col[j] = rjj;
        col[j + 1] = czero();
        let (mut a, mut b) = (self.g[j], self.g[j + 1]);
        rot.apply(&mut a, &mut b);
        self.g[j] = a;
        self.g[j + 1] = b;
        for i in 0..=j {
            self.r[(i, j)] = col[i];
        }
        self.rotations.push(rot);
        self.residual_norm()
    }

    pub fn residual_norm(&self) -> T {
        // components beyond the current column count were never rotated in
        let j = self.rotations.len();
        self.g[j..].iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    /// Smallest `|r_ii|` relative to the largest; zero means rank deficiency.
    pub fn diagonal_ratio(&self) -> T {
        let j = self.rotations.len();
        if j == 0 {
            return T::one();
        }
        let d: Vec<T> = (0..j).map(|i| self.r[(i, i)].norm()).collect();
        let mx = d.iter().copied().fold(T::zero(), T::max);
        let mn = d.iter().copied().fold(T::infinity(), T::min);
        if mx == T::zero() {
            T::zero()
        } else {
            mn / mx
        }
    }

    /// Solution of the current least-squares problem. Columns with a
    /// vanishing diagonal are assigned zero coefficients.
    pub fn solve(&self) -> Vec<C<T>> {
        let j = self.rotations.len();
        let tiny = self.r.max_abs() * T::epsilon();
        let mut x = self.g[..j].to_vec();
        for i in (0..j).rev() {
            let mut s = x[i];
            for p in i + 1..j {
                s -= self.r[(i, p)] * x[p];
            }
            let d = self.r[(i, i)];
            x[i] = if d.norm() <= tiny { czero() } else { s / d };
        }
        x
    }
}

#[derive(Clone, Debug)]
pub struct LsqSolution<T: Real> {
    pub y: Vec<C<T>>,
    pub resnorm: T,
    /// Set when `H̄` is numerically rank deficient (exact Arnoldi breakdown).
    pub rank_deficient: bool,
}

/// Solves `min ‖H y − rhs‖₂` for an upper Hessenberg `(j+1)×j` or square `H`.
pub fn hessenberg_lsq<T: Real>(h: &DenseMatrix<T>, rhs: &[C<T>]) -> LsqSolution<T> {
    let (rows, cols) = (h.nrows(), h.ncols());
    assert!(rows == cols + 1 || rows == cols, "Hessenberg shape");
    assert_eq!(rhs.len(), rows);
    let mut padded = rhs.to_vec();
    if rows == cols {
        padded.push(czero());
    }
    let mut lsq = HessenbergLsq::with_rhs(&padded, cols);
    for j in 0..cols {
        let mut col: Vec<C<T>> = (0..=j + 1).map(|i| if i < rows { h[(i, j)] } else { czero() }).collect();
        if j + 1 >= rows {
            col[j + 1] = czero();
        }
        lsq.push_column(&col);
    }
    let rank_deficient = lsq.diagonal_ratio() <= T::epsilon() * lit(cols.max(1) as f64);
    let y = lsq.solve();
    LsqSolution { resnorm: lsq.residual_norm(), y, rank_deficient }
}
