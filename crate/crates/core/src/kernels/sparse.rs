//! Compressed-row complex sparse matrices and shifted products `(A + σI)x`.

use crate::error::{Error, Result};
use crate::kernels::dense::DenseMatrix;
use crate::scalar::{czero, Real, C};

/// A scalar shift σ applied as `A + σI`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Shift<T: Real>(pub C<T>);

impl<T: Real> Shift<T> {
    pub fn new(value: C<T>) -> Result<Self> {
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(Error::NonFinite("shift"));
        }
        Ok(Shift(value))
    }

    pub fn real(re: T) -> Self {
        Shift(C::new(re, T::zero()))
    }

    pub fn zero() -> Self {
        Shift(czero())
    }

    #[inline]
    pub fn value(&self) -> C<T> {
        self.0
    }
}

/// CSR matrix with complex entries.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseOperator<T: Real> {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<C<T>>,
}

impl<T: Real> SparseOperator<T> {
    /// Builds from raw CSR arrays, validating every structural invariant.
    /// Column indices within a row are sorted; duplicates are rejected.
    pub fn from_csr(
        nrows: usize,
        ncols: usize,
        row_ptr: Vec<usize>,
        col_idx: Vec<usize>,
        values: Vec<C<T>>,
    ) -> Result<Self> {
        if row_ptr.len() != nrows + 1 {
            return Err(Error::InvalidStructure(format!(
                "row_ptr has length {}, expected {}",
                row_ptr.len(),
                nrows + 1
            )));
        }
        if row_ptr[0] != 0 {
            return Err(Error::InvalidStructure("row_ptr[0] must be 0".into()));
        }
        if row_ptr.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidStructure("row_ptr is not nondecreasing".into()));
        }
        let nnz = row_ptr[nrows];
        if col_idx.len() != nnz || values.len() != nnz {
            return Err(Error::InvalidStructure(format!(
                "row_ptr[nrows] = {nnz} but col_idx/values have lengths {}/{}",
                col_idx.len(),
                values.len()
            )));
        }
        if let Some(&c) = col_idx.iter().find(|&&c| c >= ncols) {
            return Err(Error::InvalidStructure(format!("column index {c} out of range")));
        }
        if !crate::kernels::vector::is_finite(&values) {
            return Err(Error::NonFinite("sparse values"));
        }
        let mut op = SparseOperator { nrows, ncols, row_ptr, col_idx, values };
        op.sort_rows()?;
        Ok(op)
    }

    /// Builds from coordinate triplets; duplicate entries are summed.
    pub fn from_triplets(nrows: usize, ncols: usize, triplets: &[(usize, usize, C<T>)]) -> Result<Self> {
        let mut counts = vec![0usize; nrows + 1];
        for &(i, j, _) in triplets {
            if i >= nrows || j >= ncols {
                return Err(Error::InvalidStructure(format!("entry ({i}, {j}) out of range")));
            }
            counts[i + 1] += 1;
        }
        for i in 0..nrows {
            counts[i + 1] += counts[i];
        }
        let mut next = counts.clone();
        let mut entries = vec![(0usize, czero::<T>()); triplets.len()];
        for &(i, j, v) in triplets {
            entries[next[i]] = (j, v);
            next[i] += 1;
        }
        let mut row_ptr = Vec::with_capacity(nrows + 1);
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values = Vec::with_capacity(triplets.len());
        row_ptr.push(0);
        for i in 0..nrows {
            let row = &mut entries[counts[i]..counts[i + 1]];
            row.sort_by_key(|e| e.0);
            for &(j, v) in row.iter() {
                if col_idx.len() > row_ptr[i] && *col_idx.last().unwrap() == j {
                    *values.last_mut().unwrap() += v;
                } else {
                    col_idx.push(j);
                    values.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Self::from_csr(nrows, ncols, row_ptr, col_idx, values)
    }

    pub fn identity(n: usize) -> Self {
        Self::scaled_identity(n, C::new(T::one(), T::zero()))
    }

    pub fn scaled_identity(n: usize, alpha: C<T>) -> Self {
        SparseOperator {
            nrows: n,
            ncols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: vec![alpha; n],
        }
    }

    pub fn from_dense(a: &DenseMatrix<T>) -> Self {
        let mut trip = Vec::new();
        for i in 0..a.nrows() {
            for j in 0..a.ncols() {
                let v = a[(i, j)];
                if v != czero() {
                    trip.push((i, j, v));
                }
            }
        }
        Self::from_triplets(a.nrows(), a.ncols(), &trip).expect("dense entries are in range")
    }

    fn sort_rows(&mut self) -> Result<()> {
        for i in 0..self.nrows {
            let (s, e) = (self.row_ptr[i], self.row_ptr[i + 1]);
            let sorted = self.col_idx[s..e].windows(2).all(|w| w[0] < w[1]);
            if !sorted {
                let mut pairs: Vec<_> = self.col_idx[s..e]
                    .iter()
                    .copied()
                    .zip(self.values[s..e].iter().copied())
                    .collect();
                pairs.sort_by_key(|p| p.0);
                if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
                    return Err(Error::InvalidStructure(format!("duplicate column in row {i}")));
                }
                for (k, (c, v)) in pairs.into_iter().enumerate() {
                    self.col_idx[s + k] = c;
                    self.values[s + k] = v;
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.nrows
    }
    #[inline]
    pub fn ncols(&self) -> usize {
        self.ncols
    }
    #[inline]
    pub fn nnz(&self) -> usize {
        self.values.len()
    }
    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }
    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }
    pub fn values(&self) -> &[C<T>] {
        &self.values
    }
    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[C<T>]) {
        let (s, e) = (self.row_ptr[i], self.row_ptr[i + 1]);
        (&self.col_idx[s..e], &self.values[s..e])
    }

    /// Entry `(i, j)` or zero when outside the pattern.
    pub fn get(&self, i: usize, j: usize) -> C<T> {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&j) {
            Ok(p) => vals[p],
            Err(_) => czero(),
        }
    }

    /// `y ← (A + σI)x` without allocation.
    pub fn spmv_into(&self, x: &[C<T>], shift: Shift<T>, y: &mut [C<T>]) -> Result<()> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch { context: "spmv on non-square operator", expected: self.nrows, got: self.ncols });
        }
        if x.len() != self.ncols {
            return Err(Error::DimensionMismatch { context: "spmv input", expected: self.ncols, got: x.len() });
        }
        if y.len() != self.nrows {
            return Err(Error::DimensionMismatch { context: "spmv output", expected: self.nrows, got: y.len() });
        }
        let sigma = shift.value();
        for i in 0..self.nrows {
            let (s, e) = (self.row_ptr[i], self.row_ptr[i + 1]);
            let mut acc = czero();
            for p in s..e {
                acc += self.values[p] * x[self.col_idx[p]];
            }
            y[i] = if sigma == czero() { acc } else { acc + sigma * x[i] };
        }
        Ok(())
    }

    /// Returns `(A + σI)x`; exactly `Ax` when σ = 0.
    pub fn spmv(&self, x: &[C<T>], shift: Shift<T>) -> Result<Vec<C<T>>> {
        let mut y = vec![czero(); self.nrows];
        self.spmv_into(x, shift, &mut y)?;
        Ok(y)
    }

    /// Returns `A + σI` as a new operator; the diagonal is added to the pattern if absent.
    pub fn shifted(&self, shift: Shift<T>) -> SparseOperator<T> {
        let sigma = shift.value();
        let mut trip = Vec::with_capacity(self.nnz() + self.nrows);
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                trip.push((i, j, v));
            }
            if i < self.ncols {
                trip.push((i, i, sigma));
            }
        }
        Self::from_triplets(self.nrows, self.ncols, &trip).expect("pattern stays in range")
    }

    /// `αA` on the same pattern.
    pub fn scaled(&self, alpha: C<T>) -> SparseOperator<T> {
        let mut out = self.clone();
        for v in out.values.iter_mut() {
            *v *= alpha;
        }
        out
    }

    /// Applies `f` to every stored value (same pattern).
    pub fn map_values(&self, mut f: impl FnMut(usize, usize, C<T>) -> C<T>) -> SparseOperator<T> {
        let mut out = self.clone();
        for i in 0..self.nrows {
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                out.values[p] = f(i, self.col_idx[p], self.values[p]);
            }
        }
        out
    }

    /// Maximum absolute column sum.
    pub fn norm1(&self) -> T {
        let mut colsum = vec![T::zero(); self.ncols];
        for (c, v) in self.col_idx.iter().zip(&self.values) {
            colsum[*c] += v.norm();
        }
        colsum.into_iter().fold(T::zero(), T::max)
    }

    pub fn norm_fro(&self) -> T {
        self.values.iter().map(|v| v.norm_sqr()).sum::<T>().sqrt()
    }

    /// Largest singular value by power iteration on `AᴴA`.
    pub fn norm2_estimate(&self, iterations: usize) -> T {
        let n = self.ncols;
        let mut x: Vec<C<T>> = (0..n)
            .map(|i| C::new(T::one() + T::from_usize(i % 7).unwrap() * crate::scalar::lit(0.1), T::zero()))
            .collect();
        let mut est = T::zero();
        for _ in 0..iterations {
            let nx = crate::kernels::vector::norm2(&x);
            if nx == T::zero() {
                return T::zero();
            }
            crate::kernels::vector::scale(C::new(T::one() / nx, T::zero()), &mut x);
            let y = self.spmv(&x, Shift::zero()).expect("square");
            est = crate::kernels::vector::norm2(&y);
            x = self.adjoint_spmv(&y);
        }
        est
    }

    /// `Aᴴ y`
    pub fn adjoint_spmv(&self, y: &[C<T>]) -> Vec<C<T>> {
        let mut out = vec![czero(); self.ncols];
        for i in 0..self.nrows {
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                out[self.col_idx[p]] += self.values[p].conj() * y[i];
            }
        }
        out
    }

    pub fn to_dense(&self) -> DenseMatrix<T> {
        let mut d = DenseMatrix::zeros(self.nrows, self.ncols);
        for i in 0..self.nrows {
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                d[(i, self.col_idx[p])] = self.values[p];
            }
        }
        d
    }

    /// True when every row has a stored diagonal entry.
    pub fn has_full_diagonal(&self) -> bool {
        (0..self.nrows.min(self.ncols)).all(|i| self.row(i).0.binary_search(&i).is_ok())
    }

    /// Checks `A = Aᴴ` entrywise to `tol` (absolute).
    pub fn is_hermitian(&self, tol: T) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                if (v - self.get(j, i).conj()).norm() > tol {
                    return false;
                }
            }
        }
        true
    }
}
