//! Generic minimum-residual projection onto a supplied search space, and the
//! two-term residual decomposition for nested spaces.

use crate::error::{Error, Result};
use crate::kernels::qr::qr_thin;
use crate::kernels::vector::{norm2, sub};
use crate::kernels::{hermitian_solve, DenseMatrix, Shift, SparseOperator};
use crate::precond::Preconditioner;
use crate::scalar::{lit, to_f64, Real, C};

/// Search space `S` together with its image `AS = (A + σI)·S`.
#[derive(Clone, Debug)]
pub struct SearchSpace<T: Real> {
    pub s: DenseMatrix<T>,
    pub as_sigma: DenseMatrix<T>,
}

impl<T: Real> SearchSpace<T> {
    pub fn new(s: DenseMatrix<T>, as_sigma: DenseMatrix<T>) -> Result<Self> {
        if s.nrows() != as_sigma.nrows() || s.ncols() != as_sigma.ncols() {
            return Err(Error::DimensionMismatch { context: "search space image", expected: s.ncols(), got: as_sigma.ncols() });
        }
        Ok(SearchSpace { s, as_sigma })
    }

    /// Builds `S = M⁻¹·basis` and its image explicitly, column by column.
    pub fn from_basis(a: &SparseOperator<T>, shift: Shift<T>, precond: &Preconditioner<T>, basis: &DenseMatrix<T>) -> Result<Self> {
        let mut s = DenseMatrix::with_rows(a.nrows());
        let mut img = DenseMatrix::with_rows(a.nrows());
        for j in 0..basis.ncols() {
            let z = precond.apply_inverse(basis.col(j))?;
            img.push_col(&a.spmv(&z, shift)?);
            s.push_col(&z);
        }
        Ok(SearchSpace { s, as_sigma: img })
    }

    pub fn dim(&self) -> usize {
        self.s.ncols()
    }
}

/// `y = N⁻¹(AS)ᴴr0` with `N = (AS)ᴴAS`; returns `(x0 + S y, r0 − AS y)`.
pub fn project_minres<T: Real>(space: &SearchSpace<T>, x0: &[C<T>], r0: &[C<T>]) -> Result<(Vec<C<T>>, Vec<C<T>>)> {
    if space.dim() == 0 {
        return Err(Error::InvalidArgument("empty search space".into()));
    }
    let n = space.as_sigma.adjoint_matmul(&space.as_sigma);
    let rhs = space.as_sigma.adjoint_matvec(r0);
    let y = hermitian_solve(&n, &rhs)?;
    let dx = space.s.matvec(&y);
    let dr = space.as_sigma.matvec(&y);
    let x = x0.iter().zip(&dx).map(|(a, b)| a + b).collect();
    Ok((x, sub(r0, &dr)))
}

#[derive(Clone, Debug)]
pub struct Decomposition<T: Real> {
    /// Residual of the projection onto the smaller space.
    pub lhs: Vec<C<T>>,
    /// `(I − P_m)P_{m+1}r0 + (I − P_{m+1})r0`.
    pub rhs: Vec<C<T>>,
    pub term1_norm: T,
    pub term2_norm: T,
    pub gap: T,
}

fn project<T: Real>(q: &DenseMatrix<T>, v: &[C<T>]) -> Vec<C<T>> {
    q.matvec(&q.adjoint_matvec(v))
}

/// Checks the two-term decomposition of the projected residual for
/// `range(space_m.AS) ⊆ range(space_m1.AS)`.
pub fn residual_decomposition_check<T: Real>(space_m: &SearchSpace<T>, space_m1: &SearchSpace<T>, r0: &[C<T>]) -> Result<Decomposition<T>> {
    let qm = qr_thin(&space_m.as_sigma).q;
    let qm1 = qr_thin(&space_m1.as_sigma).q;
    let mut defect = T::zero();
    for j in 0..qm.ncols() {
        let c = qm.col(j);
        defect = defect.max(norm2(&sub(c, &project(&qm1, c))));
    }
    if defect > lit(1e-8) {
        return Err(Error::NotNested { defect: to_f64(defect) });
    }
    let zeros = vec![C::new(T::zero(), T::zero()); r0.len()];
    let (_, lhs) = project_minres(space_m, &zeros, r0)?;
    let p1 = project(&qm1, r0);
    let term1 = sub(&p1, &project(&qm, &p1));
    let term2 = sub(r0, &p1);
    let rhs: Vec<C<T>> = term1.iter().zip(&term2).map(|(a, b)| a + b).collect();
    let gap = norm2(&sub(&lhs, &rhs));
    Ok(Decomposition { term1_norm: norm2(&term1), term2_norm: norm2(&term2), lhs, rhs, gap })
}
