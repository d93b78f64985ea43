//! Method dispatch over a shifted family, and sequences of families that
//! carry a recycle space from one matrix to the next.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::family::{finish_report, ShiftedFamily, SolveOptions};
use crate::gmres::restarted_gmres;
use crate::kernels::vector::norm2;
use crate::kernels::SparseOperator;
use crate::operator::ShiftedOperator;
use crate::precond::{PrecondKind, Preconditioner};
use crate::report::SolveReport;
use crate::rgmres::{rgmres_solve, RecycleSpace};
use crate::scalar::{lit, to_f64, Real, C};
use crate::shifted_gmres::sgmres_solve;
use crate::shifted_rgmres::srgmres_solve;
use crate::kernels::Shift;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Sgmres,
    Srgmres,
    SeqGmres,
    SeqRgmres,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Sgmres, Method::Srgmres, Method::SeqGmres, Method::SeqRgmres];

    pub fn name(self) -> &'static str {
        match self {
            Method::Sgmres => "sgmres",
            Method::Srgmres => "srgmres",
            Method::SeqGmres => "seq-gmres",
            Method::SeqRgmres => "seq-rgmres",
        }
    }

    pub fn recycles(self) -> bool {
        matches!(self, Method::Srgmres | Method::SeqRgmres)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Method::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| Error::InvalidArgument(format!("unknown method {s:?}")))
    }
}

/// Solves every system of the family with `method`. `rspace_in` is only used by
/// the recycling methods; the returned space is empty for the others.
pub fn solve_family<T: Real>(
    method: Method,
    family: &mut ShiftedFamily<T>,
    p: &Preconditioner<T>,
    opts: &SolveOptions,
    rspace_in: RecycleSpace<T>,
) -> Result<(SolveReport, RecycleSpace<T>)> {
    let n = family.dim();
    match method {
        Method::Sgmres => Ok((sgmres_solve(family, p, opts)?, RecycleSpace::empty(n))),
        Method::Srgmres => srgmres_solve(family, p, rspace_in, opts),
        Method::SeqGmres => Ok((seq_solve(family, p, opts, None)?.0, RecycleSpace::empty(n))),
        Method::SeqRgmres => seq_solve(family, p, opts, Some(rspace_in)),
    }
}

/// Tolerance for a solve started from the current residual that reproduces the
/// family's `eps·‖r0‖` criterion.
fn local_eps<T: Real>(family: &ShiftedFamily<T>, l: usize, eps: f64) -> T {
    let cur = norm2(&family.r[l]);
    let r0 = family.initial_residual_norm(l);
    if cur == r0 || cur == T::zero() {
        lit(eps)
    } else {
        lit::<T>(eps) * r0 / cur
    }
}

/// Independent solves, one shift at a time, with a shared preconditioner.
/// With `Some` recycle space the space moves from shift to shift for free.
fn seq_solve<T: Real>(
    family: &mut ShiftedFamily<T>,
    p: &Preconditioner<T>,
    opts: &SolveOptions,
    recycle: Option<RecycleSpace<T>>,
) -> Result<(SolveReport, RecycleSpace<T>)> {
    opts.validate()?;
    if p.dim() != family.dim() {
        return Err(Error::DimensionMismatch { context: "preconditioner", expected: family.dim(), got: p.dim() });
    }
    let start = Instant::now();
    let mut reports = family.start_reports();
    let matrix = family.op.clone();
    let method = if recycle.is_some() { Method::SeqRgmres } else { Method::SeqGmres };
    let mut rs = recycle.unwrap_or_else(|| RecycleSpace::empty(family.dim()));
    let mut prev: Option<Shift<T>> = None;
    let mut setup = (0, 0);
    let mut eig_failures = 0;
    for l in 0..family.len() {
        family.update_converged(l, opts.eps);
        let sl = family.shifts[l];
        let op = ShiftedOperator::new(&matrix, sl, p);
        let eps = local_eps(family, l, opts.eps);
        let r0 = family.initial_residual_norm(l);
        let scale = if r0 > T::zero() { norm2(&family.r[l]) / r0 } else { T::zero() };
        let mut own = (0, 0);
        match method {
            Method::SeqGmres => {
                if family.converged[l] {
                    continue;
                }
                let out = restarted_gmres(&op, &family.x[l], &family.r[l], opts.m, eps, opts.max_cycles)?;
                family.x[l] = out.x;
                family.r[l] = out.r;
                reports[l].cycles = out.cycles;
                reports[l].history.extend(out.history.iter().map(|&h| to_f64(h * scale)));
            }
            _ => {
                match prev {
                    None if !rs.is_empty() => {
                        rs = RecycleSpace::from_directions(&op, &rs.u)?;
                        own = (op.matvecs(), op.precond_applies());
                        setup = own;
                    }
                    Some(ps) if !rs.is_empty() => rs = rs.rebase(Shift(sl.value() - ps.value()))?,
                    _ => {}
                }
                prev = Some(sl);
                let out = rgmres_solve(&op, &family.x[l], &family.r[l], rs, opts.m, opts.k, eps, opts.max_cycles)?;
                family.x[l] = out.x;
                family.r[l] = out.r;
                rs = out.recycle;
                eig_failures += out.eig_failures;
                reports[l].cycles = out.cycles;
                reports[l].history.extend(out.history.iter().map(|&h| to_f64(h * scale)));
            }
        }
        reports[l].matvecs += op.matvecs() - own.0;
        reports[l].precond_applies += op.precond_applies() - own.1;
        family.update_converged(l, opts.eps);
    }
    let dim = if method == Method::SeqRgmres { rs.dim() } else { 0 };
    let report = finish_report(method.name(), family, reports, setup, dim, eig_failures, start)?;
    Ok((report, rs))
}

/// One member of a sequence of shifted families.
#[derive(Clone, Debug)]
pub struct SequenceMember<T: Real> {
    pub op: SparseOperator<T>,
    pub b: Vec<C<T>>,
}

#[derive(Clone, Debug)]
pub struct SequenceResult<T: Real> {
    pub reports: Vec<SolveReport>,
    pub solutions: Vec<Vec<Vec<C<T>>>>,
    pub recycle: RecycleSpace<T>,
}

/// Solves each member's shifted family in order, rebuilding the preconditioner
/// per member and carrying the recycle space across members.
pub fn solve_sequence<T: Real>(
    method: Method,
    members: &[SequenceMember<T>],
    shifts: &[Shift<T>],
    kind: PrecondKind,
    opts: &SolveOptions,
) -> Result<SequenceResult<T>> {
    let n = members.first().map(|m| m.op.nrows()).unwrap_or(0);
    let mut rs = RecycleSpace::empty(n);
    let mut reports = Vec::with_capacity(members.len());
    let mut solutions = Vec::with_capacity(members.len());
    for member in members {
        let mut family = ShiftedFamily::new(member.op.clone(), member.b.clone(), shifts.to_vec())?;
        let p = Preconditioner::for_family(kind, &member.op, shifts)?;
        let (rep, out) = solve_family(method, &mut family, &p, opts, rs)?;
        rs = out;
        reports.push(rep);
        solutions.push(family.x);
    }
    Ok(SequenceResult { reports, solutions, recycle: rs })
}
