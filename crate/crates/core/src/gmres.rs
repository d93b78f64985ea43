//! Restarted right-preconditioned GMRES exposing its Arnoldi bases.

use crate::error::Result;
use crate::kernels::lsq::HessenbergLsq;
use crate::kernels::mgs::mgs_orthogonalize_blocks;
use crate::kernels::vector::norm2;
use crate::kernels::DenseMatrix;
use crate::operator::ShiftedOperator;
use crate::scalar::{creal, scaled_tol, Real, C};

/// Breakdown threshold on `‖w_orth‖ / ‖w‖`, with `‖w‖ ≤ ‖A_p‖` the local operator scale.
const BREAKDOWN_TOL: f64 = 1e-14;

/// Bases of one Arnoldi cycle of `j` steps.
///
/// Normally `V` is n×(j+1) and `H̄` is (j+1)×j. After a happy breakdown `V`
/// keeps j columns and `H` is square; code reads the row count of `h`.
#[derive(Clone, Debug)]
pub struct ArnoldiData<T: Real> {
    pub v: DenseMatrix<T>,
    pub h: DenseMatrix<T>,
    pub z: DenseMatrix<T>,
    pub steps: usize,
    pub breakdown: bool,
}

impl<T: Real> ArnoldiData<T> {
    pub fn empty(n: usize) -> Self {
        ArnoldiData { v: DenseMatrix::with_rows(n), h: DenseMatrix::zeros(0, 0), z: DenseMatrix::with_rows(n), steps: 0, breakdown: false }
    }

    /// `V_{j+1} H̄_j`, the image of `Z_j` under the cycle operator.
    pub fn image(&self) -> DenseMatrix<T> {
        self.v.matmul(&self.h)
    }
}

#[derive(Clone, Debug)]
pub struct CycleResult<T: Real> {
    pub x: Vec<C<T>>,
    pub r: Vec<C<T>>,
    pub data: ArnoldiData<T>,
    /// Coefficients against an extra orthogonalization block (k×j, empty for plain GMRES).
    pub b: DenseMatrix<T>,
    /// Least-squares solution on `H̄`.
    pub y: Vec<C<T>>,
    /// Givens residual estimate after each step.
    pub history: Vec<T>,
    pub resnorm: T,
    pub matvecs: usize,
}

/// Arnoldi on the operator projected against the orthonormal block `c`
/// (empty for plain GMRES), with the incremental least-squares solve.
pub(crate) fn arnoldi_cycle<T: Real>(
    op: &ShiftedOperator<T>,
    c: &DenseMatrix<T>,
    r0: &[C<T>],
    m: usize,
    tol_abs: T,
) -> Result<(ArnoldiData<T>, DenseMatrix<T>, Vec<C<T>>, Vec<T>, T)> {
    let n = r0.len();
    let beta = norm2(r0);
    let mut data = ArnoldiData::empty(n);
    let mut bmat = DenseMatrix::zeros(c.ncols(), 0);
    if beta <= tol_abs || beta == T::zero() || m == 0 {
        return Ok((data, bmat, Vec::new(), Vec::new(), beta));
    }
    let v0: Vec<C<T>> = r0.iter().map(|x| x / creal(beta)).collect();
    data.v.push_col(&v0);
    let mut hcols: Vec<Vec<C<T>>> = Vec::with_capacity(m);
    let mut bcols: Vec<Vec<C<T>>> = Vec::with_capacity(m);
    let mut lsq = HessenbergLsq::new(creal(beta), m);
    let mut history = Vec::with_capacity(m);
    let bd = scaled_tol::<T>(BREAKDOWN_TOL, 4.0);
    let mut resnorm = beta;
    for j in 0..m {
        let (z, w) = op.apply(data.v.col(j))?;
        data.z.push_col(&z);
        let wnorm = norm2(&w);
        let orth = mgs_orthogonalize_blocks(&w, &[c, &data.v]);
        let hnorm = norm2(&orth.w_orth);
        let mut col = orth.coeffs[1].clone();
        let broke = hnorm <= bd * wnorm;
        col.push(if broke { creal(T::zero()) } else { creal(hnorm) });
        resnorm = lsq.push_column(&col);
        history.push(resnorm);
        hcols.push(col);
        bcols.push(orth.coeffs[0].clone());
        data.steps = j + 1;
        if broke {
            data.breakdown = true;
            break;
        }
        let vn: Vec<C<T>> = orth.w_orth.iter().map(|x| x / creal(hnorm)).collect();
        data.v.push_col(&vn);
        if resnorm <= tol_abs {
            break;
        }
    }
    let j = data.steps;
    let rows = if data.breakdown { j } else { j + 1 };
    data.h = DenseMatrix::from_fn(rows, j, |i, k| if i < hcols[k].len() { hcols[k][i] } else { creal(T::zero()) });
    bmat = DenseMatrix::from_fn(c.ncols(), j, |i, k| bcols[k][i]);
    let y = lsq.solve();
    Ok((data, bmat, y, history, resnorm))
}

/// One GMRES(m) cycle on `(A + σI)M⁻¹` from `(x0, r0)`.
///
/// Stops early when the Givens estimate reaches `tol_abs` or on happy breakdown.
/// The returned residual is the recurrence `r0 − V H̄ y`.
pub fn gmres_cycle<T: Real>(op: &ShiftedOperator<T>, x0: &[C<T>], r0: &[C<T>], m: usize, tol_abs: T) -> Result<CycleResult<T>> {
    let before = op.matvecs();
    let empty = DenseMatrix::with_rows(r0.len());
    let (data, b, y, history, resnorm) = arnoldi_cycle(op, &empty, r0, m, tol_abs)?;
    let mut x = x0.to_vec();
    let mut r = r0.to_vec();
    if data.steps > 0 {
        let dx = data.z.matvec(&y);
        let dr = data.v.matvec(&data.h.matvec(&y));
        for i in 0..x.len() {
            x[i] += dx[i];
            r[i] -= dr[i];
        }
    }
    Ok(CycleResult { x, r, data, b, y, history, resnorm, matvecs: op.matvecs() - before })
}

#[derive(Clone, Debug)]
pub struct GmresResult<T: Real> {
    pub x: Vec<C<T>>,
    pub r: Vec<C<T>>,
    pub converged: bool,
    pub stagnated: bool,
    pub cycles: usize,
    pub matvecs: usize,
    /// Relative residual after each cycle.
    pub history: Vec<T>,
}

/// `true` when a cycle failed to reduce the residual at all.
pub(crate) fn stagnated<T: Real>(before: T, after: T) -> bool {
    after >= before * (T::one() - T::epsilon() * crate::scalar::lit(16.0))
}

/// Restarted GMRES(m) up to `‖r‖ ≤ eps‖r_init‖` or `max_cycles`.
pub fn restarted_gmres<T: Real>(
    op: &ShiftedOperator<T>,
    x0: &[C<T>],
    r0: &[C<T>],
    m: usize,
    eps: T,
    max_cycles: usize,
) -> Result<GmresResult<T>> {
    let before = op.matvecs();
    let r0norm = norm2(r0);
    let tol = eps * r0norm;
    let mut x = x0.to_vec();
    let mut r = r0.to_vec();
    let mut res = r0norm;
    let mut out = GmresResult { x: Vec::new(), r: Vec::new(), converged: res <= tol, stagnated: false, cycles: 0, matvecs: 0, history: Vec::new() };
    while !out.converged && out.cycles < max_cycles {
        let cyc = gmres_cycle(op, &x, &r, m, tol)?;
        out.cycles += 1;
        x = cyc.x;
        r = cyc.r;
        let new = norm2(&r);
        out.history.push(if r0norm > T::zero() { new / r0norm } else { T::zero() });
        out.converged = new <= tol;
        if !out.converged && stagnated(res, new) {
            out.stagnated = true;
            break;
        }
        res = new;
    }
    out.x = x;
    out.r = r;
    out.matvecs = op.matvecs() - before;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{Shift, SparseOperator};
    use crate::operator::true_residual;
    use crate::precond::Preconditioner;

    fn c(x: f64) -> C<f64> {
        C::new(x, 0.0)
    }

    #[test]
    fn identity_converges_in_one_step() {
        let a = SparseOperator::<f64>::identity(4);
        let p = Preconditioner::identity(4);
        let op = ShiftedOperator::new(&a, Shift::zero(), &p);
        let b = vec![c(1.0), c(-2.0), C::new(0.0, 3.0), c(0.5)];
        let cyc = gmres_cycle(&op, &[c(0.0); 4], &b, 10, 1e-12).unwrap();
        assert_eq!(cyc.data.steps, 1);
        for i in 0..4 {
            assert!((cyc.x[i] - b[i]).norm() < 1e-15);
        }
    }

    #[test]
    fn exact_initial_guess_costs_nothing() {
        let a = SparseOperator::<f64>::scaled_identity(3, c(2.0));
        let p = Preconditioner::identity(3);
        let op = ShiftedOperator::new(&a, Shift::zero(), &p);
        let x0 = vec![c(1.0); 3];
        let r0 = true_residual(&a, Shift::zero(), &[c(2.0); 3], &x0).unwrap();
        let cyc = gmres_cycle(&op, &x0, &r0, 5, 0.0).unwrap();
        assert_eq!((cyc.matvecs, cyc.data.steps), (0, 0));
        assert_eq!(cyc.x, x0);
    }

    #[test]
    fn happy_breakdown_on_low_degree_minimal_polynomial() {
        // two distinct eigenvalues: the Krylov space is invariant after two steps
        let a = SparseOperator::from_triplets(4, 4, &[(0, 0, c(1.0)), (1, 1, c(1.0)), (2, 2, c(3.0)), (3, 3, c(3.0))]).unwrap();
        let p = Preconditioner::identity(4);
        let op = ShiftedOperator::new(&a, Shift::zero(), &p);
        let b = vec![c(1.0); 4];
        let cyc = gmres_cycle(&op, &[c(0.0); 4], &b, 4, 0.0).unwrap();
        assert!(cyc.data.breakdown);
        assert_eq!(cyc.data.steps, 2);
        assert_eq!(cyc.data.h.nrows(), 2);
        let r = true_residual(&a, Shift::zero(), &b, &cyc.x).unwrap();
        assert!(norm2(&r) < 1e-14);
    }
}
