//! Shifted families, solver options and the per-cycle observer interface.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::gmres::ArnoldiData;
use crate::kernels::vector::norm2;
use crate::kernels::{DenseMatrix, Shift, SparseOperator};
use crate::operator::true_residual;
use crate::precond::Preconditioner;
use crate::report::{SolveReport, SystemReport};
use crate::rgmres::RecycleSpace;
use crate::scalar::{czero, lit, to_f64, Real, C};

/// How the projection shift for system ℓ is formed from the base shift σ_b.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShiftConvention {
    /// `δ = σ_ℓ − σ_b`, exact for the base operator `A + σ_b I`.
    #[default]
    Relative,
    /// `δ = σ_ℓ`; projections then target the wrong operator whenever `σ_b ≠ 0`,
    /// so true residuals are recomputed (and counted) after every projection.
    Absolute,
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub m: usize,
    pub k: usize,
    pub eps: f64,
    /// Cycle budget per base system.
    pub max_cycles: usize,
    pub convention: ShiftConvention,
    /// Run the per-shift projections of a cycle on the rayon pool.
    pub parallel: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { m: 30, k: 10, eps: 1e-8, max_cycles: 500, convention: ShiftConvention::Relative, parallel: false }
    }
}

impl SolveOptions {
    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::InvalidArgument("cycle length m must be at least 1".into()));
        }
        if !(self.eps > 0.0) {
            return Err(Error::InvalidArgument(format!("eps must be positive, got {}", self.eps)));
        }
        Ok(())
    }

    pub(crate) fn delta<T: Real>(&self, sigma: Shift<T>, base: Shift<T>) -> Shift<T> {
        match self.convention {
            ShiftConvention::Relative => Shift(sigma.value() - base.value()),
            ShiftConvention::Absolute => sigma,
        }
    }
}

/// `(A + σ_ℓ I)x_ℓ = b` for `ℓ = 1..L`, with the current iterates.
#[derive(Clone, Debug)]
pub struct ShiftedFamily<T: Real> {
    pub op: SparseOperator<T>,
    pub b: Vec<C<T>>,
    pub shifts: Vec<Shift<T>>,
    pub x: Vec<Vec<C<T>>>,
    pub r: Vec<Vec<C<T>>>,
    pub converged: Vec<bool>,
    r0_norm: Vec<T>,
    init_matvecs: Vec<usize>,
}

impl<T: Real> ShiftedFamily<T> {
    /// Family with zero initial guesses.
    pub fn new(op: SparseOperator<T>, b: Vec<C<T>>, shifts: Vec<Shift<T>>) -> Result<Self> {
        let n = b.len();
        Self::with_initial_guesses(op, b, shifts.clone(), vec![vec![czero(); n]; shifts.len()])
    }

    /// Family with given initial guesses; computing each nonzero guess's residual costs one matvec.
    pub fn with_initial_guesses(op: SparseOperator<T>, b: Vec<C<T>>, shifts: Vec<Shift<T>>, x0: Vec<Vec<C<T>>>) -> Result<Self> {
        if !op.is_square() {
            return Err(Error::DimensionMismatch { context: "family operator must be square", expected: op.nrows(), got: op.ncols() });
        }
        if b.len() != op.nrows() {
            return Err(Error::DimensionMismatch { context: "family right-hand side", expected: op.nrows(), got: b.len() });
        }
        if shifts.is_empty() {
            return Err(Error::InvalidArgument("a family needs at least one shift".into()));
        }
        for i in 0..shifts.len() {
            for j in 0..i {
                if shifts[i] == shifts[j] {
                    return Err(Error::InvalidArgument(format!("shift {} repeated", shifts[i].value())));
                }
            }
        }
        if x0.len() != shifts.len() {
            return Err(Error::DimensionMismatch { context: "initial guesses", expected: shifts.len(), got: x0.len() });
        }
        let mut r = Vec::with_capacity(shifts.len());
        let mut init_matvecs = vec![0; shifts.len()];
        for (l, x) in x0.iter().enumerate() {
            if x.len() != op.nrows() {
                return Err(Error::DimensionMismatch { context: "initial guess", expected: op.nrows(), got: x.len() });
            }
            if x.iter().all(|z| *z == czero()) {
                r.push(b.clone());
            } else {
                r.push(true_residual(&op, shifts[l], &b, x)?);
                init_matvecs[l] = 1;
            }
        }
        let r0_norm: Vec<T> = r.iter().map(|v| norm2(v)).collect();
        let converged = r0_norm.iter().map(|&v| v == T::zero()).collect();
        Ok(ShiftedFamily { op, b, shifts, x: x0, r, converged, r0_norm, init_matvecs })
    }

    pub fn len(&self) -> usize {
        self.shifts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shifts.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.b.len()
    }

    /// Norm of the residual at the initial guess.
    pub fn initial_residual_norm(&self, l: usize) -> T {
        self.r0_norm[l]
    }

    pub fn relres(&self, l: usize) -> T {
        if self.r0_norm[l] == T::zero() {
            T::zero()
        } else {
            norm2(&self.r[l]) / self.r0_norm[l]
        }
    }

    pub fn true_residual(&self, l: usize) -> Result<Vec<C<T>>> {
        true_residual(&self.op, self.shifts[l], &self.b, &self.x[l])
    }

    pub(crate) fn tol(&self, l: usize, eps: f64) -> T {
        lit::<T>(eps) * self.r0_norm[l]
    }

    /// Marks system `l` converged when its maintained residual meets `eps`.
    pub(crate) fn update_converged(&mut self, l: usize, eps: f64) -> bool {
        let ok = norm2(&self.r[l]) <= self.tol(l, eps);
        self.converged[l] = ok;
        ok
    }

    /// First unconverged system among those still eligible, in shift order.
    pub(crate) fn next_base(&self, exhausted: &[bool]) -> Option<usize> {
        (0..self.len()).find(|&l| !self.converged[l] && !exhausted[l])
    }

    pub(crate) fn start_reports(&self) -> Vec<SystemReport> {
        (0..self.len())
            .map(|l| SystemReport {
                shift: [to_f64(self.shifts[l].value().re), to_f64(self.shifts[l].value().im)],
                matvecs: self.init_matvecs[l],
                ..Default::default()
            })
            .collect()
    }
}

/// Assembles the final report: counters, convergence flags and uncounted true residuals.
pub(crate) fn finish_report<T: Real>(
    method: &str,
    family: &ShiftedFamily<T>,
    mut systems: Vec<SystemReport>,
    setup: (usize, usize),
    recycle_dim: usize,
    eig_failures: usize,
    start: Instant,
) -> Result<SolveReport> {
    for (l, s) in systems.iter_mut().enumerate() {
        s.converged = family.converged[l];
        s.relres = to_f64(family.relres(l));
        let tr = norm2(&family.true_residual(l)?);
        s.true_relres = if family.r0_norm[l] == T::zero() { 0.0 } else { to_f64(tr / family.r0_norm[l]) };
    }
    let total_matvecs = systems.iter().map(|s| s.matvecs).sum::<usize>() + setup.0;
    let total_precond_applies = systems.iter().map(|s| s.precond_applies).sum::<usize>() + setup.1;
    Ok(SolveReport {
        method: method.to_string(),
        converged: family.converged.iter().all(|&c| c),
        systems,
        total_matvecs,
        total_precond_applies,
        setup_matvecs: setup.0,
        setup_precond_applies: setup.1,
        recycle_dim,
        eig_failures,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

/// One seed projection applied during a cycle.
#[derive(Clone, Debug)]
pub struct ProjectionEvent<T: Real> {
    pub system: usize,
    /// Projection shift relative to the cycle operator.
    pub delta: Shift<T>,
    pub r_before: Vec<C<T>>,
    pub r_after: Vec<C<T>>,
    pub applied: bool,
}

/// Everything a diagnostic needs to re-verify one base cycle.
pub struct CycleEvent<'a, T: Real> {
    pub matrix: &'a SparseOperator<T>,
    pub precond: &'a Preconditioner<T>,
    pub base_index: usize,
    pub base_shift: Shift<T>,
    pub cycle: usize,
    pub base_r0: &'a [C<T>],
    pub data: &'a ArnoldiData<T>,
    /// Recycle space used by the cycle (before its end-of-cycle update).
    pub recycle: Option<&'a RecycleSpace<T>>,
    /// `B = CᴴA_pV_m` of an augmented cycle.
    pub b: Option<&'a DenseMatrix<T>>,
    pub projections: &'a [ProjectionEvent<T>],
}

pub type Observer<'o, T> = &'o mut dyn FnMut(&CycleEvent<'_, T>);
