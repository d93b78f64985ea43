//! The preconditioned shifted operator `(A + σI)M⁻¹` with application counters.

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::Result;
use crate::kernels::{Shift, SparseOperator};
use crate::precond::Preconditioner;
use crate::scalar::{Real, C};

pub struct ShiftedOperator<'a, T: Real> {
    a: &'a SparseOperator<T>,
    shift: Shift<T>,
    precond: &'a Preconditioner<T>,
    matvecs: AtomicUsize,
    precond_applies: AtomicUsize,
}

impl<'a, T: Real> ShiftedOperator<'a, T> {
    pub fn new(a: &'a SparseOperator<T>, shift: Shift<T>, precond: &'a Preconditioner<T>) -> Self {
        ShiftedOperator { a, shift, precond, matvecs: AtomicUsize::new(0), precond_applies: AtomicUsize::new(0) }
    }

    pub fn matrix(&self) -> &'a SparseOperator<T> {
        self.a
    }

    pub fn shift(&self) -> Shift<T> {
        self.shift
    }

    pub fn preconditioner(&self) -> &'a Preconditioner<T> {
        self.precond
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    /// `z = M⁻¹v`, `w = (A + σI)z`; one preconditioner application and one matvec.
    pub fn apply(&self, v: &[C<T>]) -> Result<(Vec<C<T>>, Vec<C<T>>)> {
        let z = self.precondition(v)?;
        let w = self.matvec(&z)?;
        Ok((z, w))
    }

    /// `(A + σI)x`, counted.
    pub fn matvec(&self, x: &[C<T>]) -> Result<Vec<C<T>>> {
        self.matvecs.fetch_add(1, Ordering::Relaxed);
        self.a.spmv(x, self.shift)
    }

    /// `M⁻¹v`, counted.
    pub fn precondition(&self, v: &[C<T>]) -> Result<Vec<C<T>>> {
        self.precond_applies.fetch_add(1, Ordering::Relaxed);
        self.precond.apply_inverse(v)
    }

    pub fn matvecs(&self) -> usize {
        self.matvecs.load(Ordering::Relaxed)
    }

    pub fn precond_applies(&self) -> usize {
        self.precond_applies.load(Ordering::Relaxed)
    }
}

/// `b − (A + σI)x`, not counted; used for diagnostics only.
pub fn true_residual<T: Real>(a: &SparseOperator<T>, shift: Shift<T>, b: &[C<T>], x: &[C<T>]) -> Result<Vec<C<T>>> {
    let ax = a.spmv(x, shift)?;
    Ok(b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect())
}
