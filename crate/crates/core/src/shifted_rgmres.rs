//! Shifted recycled GMRES: initial projections of every shifted residual onto
//! the recycle space, augmented seed projections after each base cycle, and
//! recycle-space maintenance across base changes and sequence members.

use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::family::{finish_report, CycleEvent, Observer, ProjectionEvent, ShiftConvention, ShiftedFamily, SolveOptions};
use crate::gmres::stagnated;
use crate::kernels::vector::norm2;
use crate::kernels::{hermitian_solve, DenseMatrix, Shift};
use crate::operator::ShiftedOperator;
use crate::precond::Preconditioner;
use crate::report::SolveReport;
use crate::rgmres::{harmonic_ritz_update, initial_projection, recycled_step, AugmentedArnoldiData, RecycleSpace};
use crate::scalar::{creal, czero, to_f64, Real, C};
use crate::shifted_gmres::{commit_projection, Outcome};

/// Gram blocks shared by all shifts for the initial recycle projection.
#[derive(Clone, Debug)]
pub struct InitialProjectionCache<T: Real> {
    pub c_zu: DenseMatrix<T>,
    pub zu_zu: DenseMatrix<T>,
}

impl<T: Real> InitialProjectionCache<T> {
    pub fn new(rs: &RecycleSpace<T>) -> Self {
        InitialProjectionCache { c_zu: rs.c.adjoint_matmul(&rs.zu), zu_zu: rs.zu.adjoint_matmul(&rs.zu) }
    }
}

fn hermitian_sum<T: Real>(base: &DenseMatrix<T>, sigma: C<T>, cross: &DenseMatrix<T>, gram: &DenseMatrix<T>) -> DenseMatrix<T> {
    let mut n = base.clone();
    if sigma == czero() {
        return n;
    }
    let d = n.ncols();
    for c in 0..d {
        for r in 0..d {
            n[(r, c)] += sigma * cross[(r, c)] + (sigma * cross[(c, r)]).conj();
        }
    }
    n.add_scaled(creal(sigma.norm_sqr()), gram);
    n
}

/// `C + σZ_U`.
fn shifted_c<T: Real>(rs: &RecycleSpace<T>, sigma: Shift<T>) -> DenseMatrix<T> {
    let mut w = rs.c.clone();
    w.add_scaled(sigma.value(), &rs.zu);
    w
}

/// Projection of `r` onto `range(C + σZ_U)`:
/// `N = I + σCᴴZ_U + σ̄Z_UᴴC + |σ|²Z_UᴴZ_U`, `y = N⁻¹(C + σZ_U)ᴴr`,
/// `x ← x + Z_U y`, `r ← r − (C + σZ_U)y`.
pub fn initial_shift_projection<T: Real>(
    rs: &RecycleSpace<T>,
    cache: &InitialProjectionCache<T>,
    sigma: Shift<T>,
    x: &[C<T>],
    r: &[C<T>],
) -> Result<(Vec<C<T>>, Vec<C<T>>)> {
    if rs.is_empty() {
        return Ok((x.to_vec(), r.to_vec()));
    }
    let n = hermitian_sum(&DenseMatrix::identity(rs.dim()), sigma.value(), &cache.c_zu, &cache.zu_zu);
    let w = shifted_c(rs, sigma);
    let y = hermitian_solve(&n, &w.adjoint_matvec(r))?;
    let dx = rs.zu.matvec(&y);
    let dr = w.matvec(&y);
    Ok((x.iter().zip(&dx).map(|(a, b)| a + b).collect(), r.iter().zip(&dr).map(|(a, b)| a - b).collect()))
}

/// Gram blocks of one augmented cycle: `ḠᴴḠ`, `[C V]ᴴ[Z_U Z]` and `[Z_U Z]ᴴ[Z_U Z]`.
#[derive(Clone, Debug)]
pub struct AugmentedProjectionCache<T: Real> {
    pub g: DenseMatrix<T>,
    pub gtg: DenseMatrix<T>,
    pub cross1: DenseMatrix<T>,
    pub zgram: DenseMatrix<T>,
    /// `Ḡᴴ·cross1`.
    gt_cross: DenseMatrix<T>,
    cv: DenseMatrix<T>,
    zz: DenseMatrix<T>,
}

impl<T: Real> AugmentedProjectionCache<T> {
    pub fn new(data: &AugmentedArnoldiData<T>, rs: &RecycleSpace<T>) -> Self {
        assert_eq!(data.k(), rs.dim(), "cycle and recycle space disagree on k");
        let g = data.g();
        let cv = rs.c.hcat(&data.arnoldi.v);
        let zz = rs.zu.hcat(&data.arnoldi.z);
        let cross1 = cv.adjoint_matmul(&zz);
        let gt_cross = g.adjoint_matmul(&cross1);
        AugmentedProjectionCache { gtg: g.adjoint_matmul(&g), zgram: zz.adjoint_matmul(&zz), cross1, gt_cross, g, cv, zz }
    }

    /// `[C V]Ḡ + σ[Z_U Z]`, built explicitly (for checks).
    pub fn shifted_image(&self, sigma: Shift<T>) -> DenseMatrix<T> {
        let mut w = self.cv.matmul(&self.g);
        w.add_scaled(sigma.value(), &self.zz);
        w
    }

    /// `[Z_U Z_m]`.
    pub fn search_space(&self) -> &DenseMatrix<T> {
        &self.zz
    }
}

/// `N = ḠᴴḠ + |σ|²·zgram + σḠᴴ·cross1 + σ̄·cross1ᴴḠ`.
pub fn assemble_n_sigma_aug<T: Real>(cache: &AugmentedProjectionCache<T>, sigma: Shift<T>) -> DenseMatrix<T> {
    hermitian_sum(&cache.gtg, sigma.value(), &cache.gt_cross, &cache.zgram)
}

/// Full right-hand side `([C V]Ḡ + σ[Z_U Z])ᴴr0 = Ḡᴴ[C V]ᴴr0 + σ̄[Z_U Z]ᴴr0`.
pub fn aug_rhs_full<T: Real>(cache: &AugmentedProjectionCache<T>, sigma: Shift<T>, r0: &[C<T>]) -> Vec<C<T>> {
    let a = cache.g.adjoint_matvec(&cache.cv.adjoint_matvec(r0));
    let b = cache.zz.adjoint_matvec(r0);
    let sc = sigma.value().conj();
    a.iter().zip(&b).map(|(x, y)| x + sc * y).collect()
}

/// Right-hand side when `r0 ⊥ C + σZ_U`: the first `k` entries vanish and the
/// rest is `BᴴCᴴr0 + H̄ᴴVᴴr0 + σ̄Z_mᴴr0`.
pub fn aug_rhs_simplified<T: Real>(data: &AugmentedArnoldiData<T>, rs: &RecycleSpace<T>, sigma: Shift<T>, r0: &[C<T>]) -> Vec<C<T>> {
    let k = rs.dim();
    let mut out = vec![czero(); k];
    let chr = rs.c.adjoint_matvec(r0);
    let bt = data.b.adjoint_matvec(&chr);
    let ht = data.arnoldi.h.adjoint_matvec(&data.arnoldi.v.adjoint_matvec(r0));
    let zt = data.arnoldi.z.adjoint_matvec(r0);
    let sc = sigma.value().conj();
    out.extend((0..ht.len()).map(|i| bt[i] + ht[i] + sc * zt[i]));
    out
}

/// `x = x0 + [Z_U Z]y`, `r = r0 − ([C V]Ḡ + σ[Z_U Z])y`.
pub fn apply_aug_projection<T: Real>(cache: &AugmentedProjectionCache<T>, sigma: Shift<T>, y: &[C<T>], x0: &[C<T>], r0: &[C<T>]) -> (Vec<C<T>>, Vec<C<T>>) {
    let zy = cache.zz.matvec(y);
    let gy = cache.cv.matvec(&cache.g.matvec(y));
    let s = sigma.value();
    let x = x0.iter().zip(&zy).map(|(a, b)| a + b).collect();
    let r = r0.iter().zip(gy.iter().zip(&zy)).map(|(a, (b, c))| a - b - s * c).collect();
    (x, r)
}

/// Seed projection onto the augmented search space of a cycle. `simplified`
/// selects the reduced right-hand side, valid once `r0 ⊥ C + σZ_U`.
pub fn project_shift_aug<T: Real>(
    data: &AugmentedArnoldiData<T>,
    rs: &RecycleSpace<T>,
    cache: &AugmentedProjectionCache<T>,
    sigma: Shift<T>,
    x0: &[C<T>],
    r0: &[C<T>],
    simplified: bool,
) -> Result<(Vec<C<T>>, Vec<C<T>>)> {
    if cache.g.ncols() == 0 {
        return Ok((x0.to_vec(), r0.to_vec()));
    }
    let rhs = if simplified { aug_rhs_simplified(data, rs, sigma, r0) } else { aug_rhs_full(cache, sigma, r0) };
    let y = hermitian_solve(&assemble_n_sigma_aug(cache, sigma), &rhs)?;
    Ok(apply_aug_projection(cache, sigma, &y, x0, r0))
}

pub fn srgmres_solve<T: Real>(
    family: &mut ShiftedFamily<T>,
    p: &Preconditioner<T>,
    rspace_in: RecycleSpace<T>,
    opts: &SolveOptions,
) -> Result<(SolveReport, RecycleSpace<T>)> {
    srgmres_solve_observed(family, p, rspace_in, opts, None)
}

/// Shifted recycled GMRES over the family. A nonempty `rspace_in` is treated
/// as coming from a previous matrix and rebuilt for this one, costing `k`
/// matvecs and preconditioner applications reported as setup. Returns the
/// final recycle space for the next family.
pub fn srgmres_solve_observed<T: Real>(
    family: &mut ShiftedFamily<T>,
    p: &Preconditioner<T>,
    rspace_in: RecycleSpace<T>,
    opts: &SolveOptions,
    mut observer: Option<Observer<'_, T>>,
) -> Result<(SolveReport, RecycleSpace<T>)> {
    opts.validate()?;
    if p.dim() != family.dim() {
        return Err(Error::DimensionMismatch { context: "preconditioner", expected: family.dim(), got: p.dim() });
    }
    let start = Instant::now();
    let nsys = family.len();
    let mut reports = family.start_reports();
    let mut exhausted = vec![false; nsys];
    let mut aug_orth = vec![false; nsys];
    let mut setup = (0usize, 0usize);
    let mut eig_failures = 0usize;
    let mut rs = rspace_in;
    let mut prev_base: Option<Shift<T>> = None;
    let matrix = family.op.clone();
    for l in 0..nsys {
        family.update_converged(l, opts.eps);
    }
    while let Some(base) = family.next_base(&exhausted) {
        let sb = family.shifts[base];
        let op = ShiftedOperator::new(&matrix, sb, p);
        let first = prev_base.is_none();
        match prev_base {
            None => {
                if !rs.is_empty() {
                    rs = RecycleSpace::from_directions(&op, &rs.u)?;
                    setup = (op.matvecs(), op.precond_applies());
                }
                let (x, r) = initial_projection(&rs, &family.x[base], &family.r[base]);
                family.x[base] = x;
                family.r[base] = r;
                family.update_converged(base, opts.eps);
                if !rs.is_empty() {
                    let cache = InitialProjectionCache::new(&rs);
                    for l in 0..nsys {
                        if l == base || family.converged[l] {
                            continue;
                        }
                        let d = opts.delta(family.shifts[l], sb);
                        let res = initial_shift_projection(&rs, &cache, d, &family.x[l], &family.r[l]);
                        let outcome = commit_projection(family, &mut reports[l], l, res, opts.convention, opts.eps)?;
                        aug_orth[l] = outcome == Outcome::Applied && opts.convention == ShiftConvention::Relative;
                    }
                }
            }
            Some(prev) => {
                rs = rs.rebase(Shift(sb.value() - prev.value()))?;
                let (x, r) = initial_projection(&rs, &family.x[base], &family.r[base]);
                family.x[base] = x;
                family.r[base] = r;
                family.update_converged(base, opts.eps);
            }
        }
        prev_base = Some(sb);
        let tol = family.tol(base, opts.eps);
        let mut res = norm2(&family.r[base]);
        let mut cycles = 0;
        while !family.converged[base] && cycles < opts.max_cycles {
            let base_r0 = if observer.is_some() { family.r[base].clone() } else { Vec::new() };
            let (x, r, data) = recycled_step(&op, &family.x[base], &family.r[base], &rs, opts.m, tol)?;
            cycles += 1;
            reports[base].cycles += 1;
            family.x[base] = x;
            family.r[base] = r;
            let new = norm2(&family.r[base]);
            reports[base].history.push(to_f64(family.relres(base)));
            family.update_converged(base, opts.eps);

            let others: Vec<usize> = (0..nsys).filter(|&l| l != base && !family.converged[l] && !exhausted[l]).collect();
            let mut events = Vec::new();
            if data.arnoldi.steps > 0 && !others.is_empty() {
                let cache = AugmentedProjectionCache::new(&data, &rs);
                let deltas: Vec<Shift<T>> = others.iter().map(|&l| opts.delta(family.shifts[l], sb)).collect();
                let simple: Vec<bool> = others.iter().map(|&l| aug_orth[l]).collect();
                let job = |(i, &l): (usize, &usize)| project_shift_aug(&data, &rs, &cache, deltas[i], &family.x[l], &family.r[l], simple[i]);
                let results: Vec<Result<(Vec<C<T>>, Vec<C<T>>)>> =
                    if opts.parallel { others.par_iter().enumerate().map(job).collect() } else { others.iter().enumerate().map(job).collect() };
                for ((&l, &d), res_l) in others.iter().zip(&deltas).zip(results) {
                    let before = if observer.is_some() { family.r[l].clone() } else { Vec::new() };
                    let outcome = commit_projection(family, &mut reports[l], l, res_l, opts.convention, opts.eps)?;
                    aug_orth[l] = outcome == Outcome::Applied && opts.convention == ShiftConvention::Relative;
                    if observer.is_some() {
                        events.push(ProjectionEvent { system: l, delta: d, r_before: before, r_after: family.r[l].clone(), applied: outcome == Outcome::Applied });
                    }
                }
            }
            if let Some(obs) = observer.as_deref_mut() {
                obs(&CycleEvent {
                    matrix: &matrix,
                    precond: p,
                    base_index: base,
                    base_shift: sb,
                    cycle: cycles,
                    base_r0: &base_r0,
                    data: &data.arnoldi,
                    recycle: Some(&rs),
                    b: Some(&data.b),
                    projections: &events,
                });
            }
            if opts.k > 0 && data.arnoldi.steps > 0 {
                match harmonic_ritz_update(&data, &rs, opts.k) {
                    Ok(h) => rs = h.space,
                    Err(Error::EigenNoConvergence { .. }) | Err(Error::Singular { .. }) => eig_failures += 1,
                    Err(e) => return Err(e),
                }
            }
            if !family.converged[base] && stagnated(res, new) {
                break;
            }
            res = new;
        }
        let own = if first { setup } else { (0, 0) };
        reports[base].matvecs += op.matvecs() - own.0;
        reports[base].precond_applies += op.precond_applies() - own.1;
        if !family.converged[base] {
            exhausted[base] = true;
        }
    }
    let dim = rs.dim();
    let report = finish_report("srgmres", family, reports, setup, dim, eig_failures, start)?;
    Ok((report, rs))
}
