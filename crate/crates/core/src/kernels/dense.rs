//! Column-major dense complex matrices for bases, Hessenbergs and Gram blocks.

use std::ops::{Index, IndexMut};

use crate::kernels::vector;
use crate::scalar::{cone, czero, Real, C};

#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<T: Real> {
    nrows: usize,
    ncols: usize,
    data: Vec<C<T>>,
}

impl<T: Real> DenseMatrix<T> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        DenseMatrix { nrows, ncols, data: vec![czero(); nrows * ncols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = cone();
        }
        m
    }

    /// Empty matrix with `nrows` rows, ready for `push_col`.
    pub fn with_rows(nrows: usize) -> Self {
        Self::zeros(nrows, 0)
    }

    pub fn from_fn(nrows: usize, ncols: usize, mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        let mut m = Self::zeros(nrows, ncols);
        for j in 0..ncols {
            for i in 0..nrows {
                m.data[j * nrows + i] = f(i, j);
            }
        }
        m
    }

    pub fn from_cols(nrows: usize, cols: &[Vec<C<T>>]) -> Self {
        let mut m = Self::with_rows(nrows);
        for c in cols {
            m.push_col(c);
        }
        m
    }

    pub fn from_col_major(nrows: usize, ncols: usize, data: Vec<C<T>>) -> Self {
        assert_eq!(data.len(), nrows * ncols);
        DenseMatrix { nrows, ncols, data }
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.nrows
    }
    #[inline]
    pub fn ncols(&self) -> usize {
        self.ncols
    }
    pub fn is_empty(&self) -> bool {
        self.ncols == 0 || self.nrows == 0
    }

    #[inline]
    pub fn col(&self, j: usize) -> &[C<T>] {
        &self.data[j * self.nrows..(j + 1) * self.nrows]
    }
    #[inline]
    pub fn col_mut(&mut self, j: usize) -> &mut [C<T>] {
        &mut self.data[j * self.nrows..(j + 1) * self.nrows]
    }

    pub fn push_col(&mut self, c: &[C<T>]) {
        assert_eq!(c.len(), self.nrows, "column length");
        self.data.extend_from_slice(c);
        self.ncols += 1;
    }

    pub fn as_slice(&self) -> &[C<T>] {
        &self.data
    }

    /// Columns `start..end` as a new matrix.
    pub fn cols(&self, start: usize, end: usize) -> Self {
        DenseMatrix {
            nrows: self.nrows,
            ncols: end - start,
            data: self.data[start * self.nrows..end * self.nrows].to_vec(),
        }
    }

    /// Sub-block `rows × cols`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        Self::from_fn(r1 - r0, c1 - c0, |i, j| self[(r0 + i, c0 + j)])
    }

    /// Writes `b` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, b: &DenseMatrix<T>) {
        for j in 0..b.ncols {
            for i in 0..b.nrows {
                self[(r0 + i, c0 + j)] = b[(i, j)];
            }
        }
    }

    /// `[self other]`
    pub fn hcat(&self, other: &DenseMatrix<T>) -> Self {
        assert_eq!(self.nrows, other.nrows, "hcat row mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        DenseMatrix { nrows: self.nrows, ncols: self.ncols + other.ncols, data }
    }

    /// `[self; other]`
    pub fn vcat(&self, other: &DenseMatrix<T>) -> Self {
        assert_eq!(self.ncols, other.ncols, "vcat column mismatch");
        let nrows = self.nrows + other.nrows;
        Self::from_fn(nrows, self.ncols, |i, j| if i < self.nrows { self[(i, j)] } else { other[(i - self.nrows, j)] })
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.ncols, self.nrows, |i, j| self[(j, i)].conj())
    }

    /// `self · b`
    pub fn matmul(&self, b: &DenseMatrix<T>) -> Self {
        assert_eq!(self.ncols, b.nrows, "matmul inner dimension");
        let mut out = Self::zeros(self.nrows, b.ncols);
        for j in 0..b.ncols {
            let oc = &mut out.data[j * self.nrows..(j + 1) * self.nrows];
            for p in 0..self.ncols {
                let bpj = b[(p, j)];
                if bpj == czero() {
                    continue;
                }
                vector::axpy(bpj, &self.data[p * self.nrows..(p + 1) * self.nrows], oc);
            }
        }
        out
    }

    /// `selfᴴ · b` without forming the adjoint.
    pub fn adjoint_matmul(&self, b: &DenseMatrix<T>) -> Self {
        assert_eq!(self.nrows, b.nrows, "adjoint_matmul row dimension");
        Self::from_fn(self.ncols, b.ncols, |i, j| vector::dot(self.col(i), b.col(j)))
    }

    pub fn matvec(&self, x: &[C<T>]) -> Vec<C<T>> {
        assert_eq!(self.ncols, x.len(), "matvec dimension");
        let mut y = vec![czero(); self.nrows];
        for (j, &xj) in x.iter().enumerate() {
            if xj != czero() {
                vector::axpy(xj, self.col(j), &mut y);
            }
        }
        y
    }

    /// `selfᴴ x`
    pub fn adjoint_matvec(&self, x: &[C<T>]) -> Vec<C<T>> {
        assert_eq!(self.nrows, x.len(), "adjoint_matvec dimension");
        (0..self.ncols).map(|j| vector::dot(self.col(j), x)).collect()
    }

    pub fn scaled(&self, alpha: C<T>) -> Self {
        DenseMatrix { nrows: self.nrows, ncols: self.ncols, data: self.data.iter().map(|v| alpha * v).collect() }
    }

    pub fn add(&self, other: &DenseMatrix<T>) -> Self {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        DenseMatrix { nrows: self.nrows, ncols: self.ncols, data: vector::add(&self.data, &other.data) }
    }

    pub fn sub(&self, other: &DenseMatrix<T>) -> Self {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        DenseMatrix { nrows: self.nrows, ncols: self.ncols, data: vector::sub(&self.data, &other.data) }
    }

    /// `self + α other`, in place.
    pub fn add_scaled(&mut self, alpha: C<T>, other: &DenseMatrix<T>) {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        vector::axpy(alpha, &other.data, &mut self.data);
    }

    pub fn norm_fro(&self) -> T {
        vector::norm2(&self.data)
    }

    pub fn max_abs(&self) -> T {
        vector::max_abs(&self.data)
    }

    pub fn is_finite(&self) -> bool {
        vector::is_finite(&self.data)
    }

    /// `‖A − Aᴴ‖_max / max(‖A‖_max, tiny)`
    pub fn hermitian_defect(&self) -> T {
        assert_eq!(self.nrows, self.ncols);
        let mut d = T::zero();
        for j in 0..self.ncols {
            for i in 0..=j {
                d = d.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        let s = self.max_abs();
        if s == T::zero() {
            d
        } else {
            d / s
        }
    }
}

impl<T: Real> Index<(usize, usize)> for DenseMatrix<T> {
    type Output = C<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C<T> {
        debug_assert!(i < self.nrows && j < self.ncols);
        &self.data[j * self.nrows + i]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for DenseMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<T> {
        debug_assert!(i < self.nrows && j < self.ncols);
        &mut self.data[j * self.nrows + i]
    }
}
