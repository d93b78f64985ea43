//! Shifted GMRES: restarted GMRES on a base system with a seed projection of
//! every other unconverged shifted residual after each cycle.

use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::family::{finish_report, CycleEvent, Observer, ProjectionEvent, ShiftConvention, ShiftedFamily, SolveOptions};
use crate::gmres::{gmres_cycle, stagnated, ArnoldiData};
use crate::kernels::vector::norm2;
use crate::kernels::{hermitian_solve, DenseMatrix, Shift};
use crate::operator::ShiftedOperator;
use crate::precond::Preconditioner;
use crate::report::{SolveReport, SystemReport};
use crate::scalar::{creal, to_f64, Real, C};

/// Gram blocks of one cycle: `H̄ᴴH̄`, `H̄ᴴVᴴZ` and `ZᴴZ`.
#[derive(Clone, Debug)]
pub struct ProjectionCache<T: Real> {
    pub hth: DenseMatrix<T>,
    pub htvz: DenseMatrix<T>,
    pub ztz: DenseMatrix<T>,
}

impl<T: Real> ProjectionCache<T> {
    pub fn new(data: &ArnoldiData<T>) -> Self {
        let vz = data.v.adjoint_matmul(&data.z);
        ProjectionCache { hth: data.h.adjoint_matmul(&data.h), htvz: data.h.adjoint_matmul(&vz), ztz: data.z.adjoint_matmul(&data.z) }
    }
}

/// Hermitian part helper: `M + Mᴴ` would double the diagonal, so the two
/// cross terms are added separately.
fn add_cross<T: Real>(n: &mut DenseMatrix<T>, sigma: C<T>, cross: &DenseMatrix<T>) {
    let j = n.ncols();
    for c in 0..j {
        for r in 0..j {
            n[(r, c)] += sigma * cross[(r, c)] + (sigma * cross[(c, r)]).conj();
        }
    }
}

/// `N = H̄ᴴH̄ + σH̄ᴴVᴴZ + σ̄ZᴴVH̄ + |σ|²ZᴴZ`.
pub fn assemble_n_sigma<T: Real>(cache: &ProjectionCache<T>, sigma: Shift<T>) -> DenseMatrix<T> {
    let s = sigma.value();
    let mut n = cache.hth.clone();
    if s.norm_sqr() == T::zero() {
        return n;
    }
    add_cross(&mut n, s, &cache.htvz);
    n.add_scaled(creal(s.norm_sqr()), &cache.ztz);
    n
}

/// `V H̄ + σZ`, the image of `Z` under `A_p + σM⁻¹` for the cycle operator `A_p`.
pub fn shifted_image<T: Real>(data: &ArnoldiData<T>, sigma: Shift<T>) -> DenseMatrix<T> {
    let mut w = data.image();
    w.add_scaled(sigma.value(), &data.z);
    w
}

/// `H̄ᴴ(Vᴴr0) + σ̄(Zᴴr0)` from precomputed inner products.
pub fn projection_rhs<T: Real>(data: &ArnoldiData<T>, sigma: Shift<T>, vhr: &[C<T>], zhr: &[C<T>]) -> Vec<C<T>> {
    let sc = sigma.value().conj();
    data.h.adjoint_matvec(vhr).iter().zip(zhr).map(|(a, b)| a + sc * b).collect()
}

/// Right-hand sides for several residuals at once through block inner products.
pub fn batched_projection_rhs<T: Real>(data: &ArnoldiData<T>, sigmas: &[Shift<T>], r0s: &[&[C<T>]]) -> Vec<Vec<C<T>>> {
    let n = data.v.nrows();
    let mut r = DenseMatrix::with_rows(n);
    for v in r0s {
        r.push_col(v);
    }
    let vhr = data.v.adjoint_matmul(&r);
    let zhr = data.z.adjoint_matmul(&r);
    sigmas.iter().enumerate().map(|(l, &s)| projection_rhs(data, s, vhr.col(l), zhr.col(l))).collect()
}

/// `x = x0 + Zy`, `r = r0 − (VH̄ + σZ)y`.
pub fn apply_projection<T: Real>(data: &ArnoldiData<T>, sigma: Shift<T>, y: &[C<T>], x0: &[C<T>], r0: &[C<T>]) -> (Vec<C<T>>, Vec<C<T>>) {
    let zy = data.z.matvec(y);
    let vhy = data.v.matvec(&data.h.matvec(y));
    let s = sigma.value();
    let x = x0.iter().zip(&zy).map(|(a, b)| a + b).collect();
    let r = r0.iter().zip(vhy.iter().zip(&zy)).map(|(a, (b, c))| a - b - s * c).collect();
    (x, r)
}

/// Seed projection of `r0` for the system `A_p + σ` onto the cycle's space.
pub fn project_shift<T: Real>(
    data: &ArnoldiData<T>,
    cache: &ProjectionCache<T>,
    sigma: Shift<T>,
    x0: &[C<T>],
    r0: &[C<T>],
) -> Result<(Vec<C<T>>, Vec<C<T>>)> {
    if data.steps == 0 {
        return Ok((x0.to_vec(), r0.to_vec()));
    }
    let rhs = projection_rhs(data, sigma, &data.v.adjoint_matvec(r0), &data.z.adjoint_matvec(r0));
    let y = hermitian_solve(&assemble_n_sigma(cache, sigma), &rhs)?;
    Ok(apply_projection(data, sigma, &y, x0, r0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Outcome {
    Applied,
    Skipped,
    Rejected,
}

/// Applies a computed projection to system `l`, recomputing the true residual
/// under the absolute convention, and refusing any update that grows `‖r‖`.
pub(crate) fn commit_projection<T: Real>(
    family: &mut ShiftedFamily<T>,
    report: &mut SystemReport,
    l: usize,
    result: Result<(Vec<C<T>>, Vec<C<T>>)>,
    convention: ShiftConvention,
    eps: f64,
) -> Result<Outcome> {
    let (x, mut r) = match result {
        Ok(v) => v,
        Err(Error::Singular { .. }) => {
            report.skipped_projections += 1;
            return Ok(Outcome::Skipped);
        }
        Err(e) => return Err(e),
    };
    if convention == ShiftConvention::Absolute {
        report.matvecs += 1;
        r = crate::operator::true_residual(&family.op, family.shifts[l], &family.b, &x)?;
    }
    let before = norm2(&family.r[l]);
    let after = norm2(&r);
    let outcome = if after > before {
        report.rejected_projections += 1;
        Outcome::Rejected
    } else {
        family.x[l] = x;
        family.r[l] = r;
        report.projections += 1;
        Outcome::Applied
    };
    report.history.push(to_f64(family.relres(l)));
    family.update_converged(l, eps);
    Ok(outcome)
}

pub fn sgmres_solve<T: Real>(family: &mut ShiftedFamily<T>, p: &Preconditioner<T>, opts: &SolveOptions) -> Result<SolveReport> {
    sgmres_solve_observed(family, p, opts, None)
}

/// Shifted GMRES over the whole family. Each base system runs restarted cycles
/// until it converges or exhausts `max_cycles`; the next unconverged system
/// then becomes the base.
pub fn sgmres_solve_observed<T: Real>(
    family: &mut ShiftedFamily<T>,
    p: &Preconditioner<T>,
    opts: &SolveOptions,
    mut observer: Option<Observer<'_, T>>,
) -> Result<SolveReport> {
    opts.validate()?;
    if p.dim() != family.dim() {
        return Err(Error::DimensionMismatch { context: "preconditioner", expected: family.dim(), got: p.dim() });
    }
    let start = Instant::now();
    let nsys = family.len();
    let mut reports = family.start_reports();
    let mut exhausted = vec![false; nsys];
    for l in 0..nsys {
        family.update_converged(l, opts.eps);
    }
    while let Some(base) = family.next_base(&exhausted) {
        let sb = family.shifts[base];
        let matrix = family.op.clone();
        let op = ShiftedOperator::new(&matrix, sb, p);
        let tol = family.tol(base, opts.eps);
        let mut res = norm2(&family.r[base]);
        let mut cycles = 0;
        while !family.converged[base] && cycles < opts.max_cycles {
            let base_r0 = if observer.is_some() { family.r[base].clone() } else { Vec::new() };
            let cyc = gmres_cycle(&op, &family.x[base], &family.r[base], opts.m, tol)?;
            cycles += 1;
            reports[base].cycles += 1;
            family.x[base] = cyc.x;
            family.r[base] = cyc.r;
            let new = norm2(&family.r[base]);
            reports[base].history.push(to_f64(family.relres(base)));
            family.update_converged(base, opts.eps);

            let others: Vec<usize> = (0..nsys).filter(|&l| l != base && !family.converged[l] && !exhausted[l]).collect();
            let mut events = Vec::new();
            if cyc.data.steps > 0 && !others.is_empty() {
                let cache = ProjectionCache::new(&cyc.data);
                let deltas: Vec<Shift<T>> = others.iter().map(|&l| opts.delta(family.shifts[l], sb)).collect();
                let results: Vec<Result<(Vec<C<T>>, Vec<C<T>>)>> = if opts.parallel {
                    others
                        .par_iter()
                        .zip(deltas.par_iter())
                        .map(|(&l, &d)| project_shift(&cyc.data, &cache, d, &family.x[l], &family.r[l]))
                        .collect()
                } else {
                    let r0s: Vec<&[C<T>]> = others.iter().map(|&l| family.r[l].as_slice()).collect();
                    let rhs = batched_projection_rhs(&cyc.data, &deltas, &r0s);
                    others
                        .iter()
                        .zip(&deltas)
                        .zip(rhs)
                        .map(|((&l, &d), rhs)| {
                            let y = hermitian_solve(&assemble_n_sigma(&cache, d), &rhs)?;
                            Ok(apply_projection(&cyc.data, d, &y, &family.x[l], &family.r[l]))
                        })
                        .collect()
                };
                for ((&l, &d), res_l) in others.iter().zip(&deltas).zip(results) {
                    let before = if observer.is_some() { family.r[l].clone() } else { Vec::new() };
                    let outcome = commit_projection(family, &mut reports[l], l, res_l, opts.convention, opts.eps)?;
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
                    data: &cyc.data,
                    recycle: None,
                    b: None,
                    projections: &events,
                });
            }
            if !family.converged[base] && stagnated(res, new) {
                break;
            }
            res = new;
        }
        reports[base].matvecs += op.matvecs();
        reports[base].precond_applies += op.precond_applies();
        if !family.converged[base] {
            exhausted[base] = true;
        }
    }
    finish_report("sgmres", family, reports, (0, 0), 0, 0, start)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::vector::sub;
    use crate::gmres::restarted_gmres;
    use crate::kernels::SparseOperator;
    use crate::problems::synthetic_convdiff;
    use crate::shifted_core::{project_minres, SearchSpace};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cycle_data(n_grid: usize, m: usize, precond_ilu: bool, seed: u64) -> (SparseOperator<f64>, Preconditioner<f64>, ArnoldiData<f64>, Vec<C<f64>>) {
        let a = synthetic_convdiff::<f64>(n_grid, 0.3, 0.2).unwrap();
        let p = if precond_ilu { crate::precond::ilu0_factor(&a).unwrap() } else { Preconditioner::identity(a.nrows()) };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b: Vec<_> = (0..a.nrows()).map(|_| C::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
        let op = ShiftedOperator::new(&a, Shift::zero(), &p);
        let cyc = gmres_cycle(&op, &vec![C::new(0.0, 0.0); b.len()], &b, m, 0.0).unwrap();
        (a, p, cyc.data, b)
    }

    #[test]
    fn zero_shift_gives_hth() {
        let (_, _, data, _) = cycle_data(5, 8, true, 1);
        let cache = ProjectionCache::new(&data);
        assert_eq!(assemble_n_sigma(&cache, Shift::zero()), cache.hth);
    }

    #[test]
    fn real_shift_identity_preconditioner_matches_shifted_hessenberg() {
        let (_, _, data, _) = cycle_data(5, 8, false, 2);
        let cache = ProjectionCache::new(&data);
        let sigma = 0.7;
        let mut hs = data.h.clone();
        for i in 0..hs.ncols() {
            hs[(i, i)] += C::new(sigma, 0.0);
        }
        let direct = hs.adjoint_matmul(&hs);
        let n = assemble_n_sigma(&cache, Shift::real(sigma));
        assert!(n.sub(&direct).max_abs() <= 1e-12 * direct.max_abs());
    }

    #[test]
    fn complex_shift_matches_tall_gram() {
        let (_, _, data, _) = cycle_data(6, 10, true, 3);
        let cache = ProjectionCache::new(&data);
        let s = Shift(C::new(1.0, 2.0));
        let w = shifted_image(&data, s);
        let g = w.adjoint_matmul(&w);
        let n = assemble_n_sigma(&cache, s);
        assert!(n.sub(&g).max_abs() <= 1e-11 * g.max_abs());
        assert!(n.hermitian_defect() <= 1e-12);
    }

    #[test]
    fn zero_shift_reproduces_base_update() {
        let a = synthetic_convdiff::<f64>(12, 0.3, 0.2).unwrap();
        let p = crate::precond::ilu0_factor(&a).unwrap();
        let b = vec![C::new(1.0, 0.0); 144];
        let op = ShiftedOperator::new(&a, Shift::zero(), &p);
        let x0 = vec![C::new(0.0, 0.0); 144];
        let cyc = gmres_cycle(&op, &x0, &b, 8, 0.0).unwrap();
        assert!(cyc.resnorm > 1e-6 * norm2(&b));
        let cache = ProjectionCache::new(&cyc.data);
        let rhs = projection_rhs(&cyc.data, Shift::zero(), &cyc.data.v.adjoint_matvec(&b), &cyc.data.z.adjoint_matvec(&b));
        let y = hermitian_solve(&assemble_n_sigma(&cache, Shift::zero()), &rhs).unwrap();
        let yn = norm2(&cyc.y);
        assert!(norm2(&sub(&y, &cyc.y)) <= 1e-11 * yn);
        let (x, _) = project_shift(&cyc.data, &cache, Shift::zero(), &x0, &b).unwrap();
        assert!(norm2(&sub(&x, &cyc.x)) <= 1e-10 * norm2(&cyc.x));
    }

    #[test]
    fn orthogonal_residual_unchanged() {
        let (_, _, data, _) = cycle_data(5, 6, true, 4);
        let cache = ProjectionCache::new(&data);
        let s = Shift::real(0.4);
        let w = shifted_image(&data, s);
        let q = crate::kernels::qr::qr_thin(&w).q;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g: Vec<_> = (0..25).map(|_| C::new(rng.random::<f64>(), rng.random::<f64>())).collect();
        let r0 = sub(&g, &q.matvec(&q.adjoint_matvec(&g)));
        let (_, r) = project_shift(&data, &cache, s, &vec![C::new(0.0, 0.0); 25], &r0).unwrap();
        assert!(norm2(&sub(&r, &r0)) <= 1e-12 * norm2(&r0));
    }

    #[test]
    fn matches_generic_projection_on_80_dim_matrix() {
        // 8×10 grid, 80 unknowns
        let mut t = Vec::new();
        for y in 0..10usize {
            for x in 0..8usize {
                let i = y * 8 + x;
                t.push((i, i, C::new(4.0, 0.5)));
                if x > 0 {
                    t.push((i, i - 1, C::new(-1.4, 0.0)));
                }
                if x < 7 {
                    t.push((i, i + 1, C::new(-0.6, 0.0)));
                }
                if y > 0 {
                    t.push((i, i - 8, C::new(-1.4, 0.0)));
                }
                if y < 9 {
                    t.push((i, i + 8, C::new(-0.6, 0.0)));
                }
            }
        }
        let a = SparseOperator::from_triplets(80, 80, &t).unwrap();
        let p = crate::precond::ilu0_factor(&a).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let b: Vec<_> = (0..80).map(|_| C::new(rng.random::<f64>(), rng.random::<f64>())).collect();
        let op = ShiftedOperator::new(&a, Shift::zero(), &p);
        let cyc = gmres_cycle(&op, &vec![C::new(0.0, 0.0); 80], &b, 10, 0.0).unwrap();
        let cache = ProjectionCache::new(&cyc.data);
        let s = Shift::real(0.5);
        let r0: Vec<_> = (0..80).map(|_| C::new(rng.random::<f64>(), rng.random::<f64>())).collect();
        let x0 = vec![C::new(0.0, 0.0); 80];
        let (xs, rs) = project_shift(&cyc.data, &cache, s, &x0, &r0).unwrap();
        let space = SearchSpace::new(cyc.data.z.clone(), shifted_image(&cyc.data, s)).unwrap();
        let (xg, rg) = project_minres(&space, &x0, &r0).unwrap();
        assert!(norm2(&sub(&rs, &rg)) <= 1e-11 * norm2(&r0));
        assert!(norm2(&sub(&xs, &xg)) <= 1e-10 * norm2(&xg));
    }

    #[test]
    fn batched_equals_per_shift() {
        let (_, _, data, _) = cycle_data(6, 10, true, 7);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let sig = [Shift::real(0.1), Shift(C::new(2.0, -1.0)), Shift(C::new(0.0, 30.0))];
        let rs: Vec<Vec<C<f64>>> = (0..3).map(|_| (0..36).map(|_| C::new(rng.random::<f64>(), rng.random::<f64>())).collect()).collect();
        let refs: Vec<&[C<f64>]> = rs.iter().map(|v| v.as_slice()).collect();
        let batched = batched_projection_rhs(&data, &sig, &refs);
        for l in 0..3 {
            let single = projection_rhs(&data, sig[l], &data.v.adjoint_matvec(&rs[l]), &data.z.adjoint_matvec(&rs[l]));
            assert!(norm2(&sub(&batched[l], &single)) <= 1e-13 * norm2(&single));
        }
    }

    fn family_hpd(shifts: &[f64]) -> ShiftedFamily<f64> {
        let a = synthetic_convdiff::<f64>(7, 0.0, 0.0).unwrap();
        let b = vec![C::new(1.0, 0.0); 49];
        ShiftedFamily::new(a, b, shifts.iter().map(|&s| Shift::real(s)).collect()).unwrap()
    }

    #[test]
    fn single_shift_is_restarted_gmres() {
        let mut fam = family_hpd(&[0.0]);
        let p = Preconditioner::identity(49);
        let opts = SolveOptions { m: 5, ..Default::default() };
        let rep = sgmres_solve(&mut fam, &p, &opts).unwrap();
        let op = ShiftedOperator::new(&fam.op, Shift::zero(), &p);
        let g = restarted_gmres(&op, &vec![C::new(0.0, 0.0); 49], &fam.b, 5, 1e-8, 500).unwrap();
        assert_eq!(rep.total_matvecs, g.matvecs);
        assert_eq!(fam.x[0], g.x);
    }

    #[test]
    fn two_shifts_cost_no_more_than_two_solves() {
        let mut fam = family_hpd(&[0.0, 0.1]);
        let p = Preconditioner::identity(49);
        let opts = SolveOptions { m: 10, ..Default::default() };
        let rep = sgmres_solve(&mut fam, &p, &opts).unwrap();
        assert!(rep.converged);
        let mut separate = 0;
        for s in [0.0, 0.1] {
            let op = ShiftedOperator::new(&fam.op, Shift::real(s), &p);
            let g = restarted_gmres(&op, &vec![C::new(0.0, 0.0); 49], &fam.b, 10, 1e-8, 500).unwrap();
            assert!(g.converged);
            separate += g.matvecs;
        }
        assert!(rep.total_matvecs <= separate);
        for s in &rep.systems {
            assert!(s.true_relres <= 1e-7);
        }
    }

    #[test]
    fn orderings_all_converge() {
        let shifts = [0.5, 0.01, 2.0];
        for order in [[0, 1, 2], [2, 1, 0], [1, 2, 0]] {
            let s: Vec<f64> = order.iter().map(|&i| shifts[i]).collect();
            let a = synthetic_convdiff::<f64>(7, 0.4, 0.1).unwrap();
            let mut fam = ShiftedFamily::new(a, vec![C::new(1.0, 0.0); 49], s.iter().map(|&v| Shift::real(v)).collect()).unwrap();
            let p = Preconditioner::for_family(crate::precond::PrecondKind::Ilu0, &fam.op, &fam.shifts).unwrap();
            let rep = sgmres_solve(&mut fam, &p, &SolveOptions { m: 8, ..Default::default() }).unwrap();
            assert!(rep.converged);
            for l in 0..3 {
                assert!(fam.relres(l) <= 1e-8);
            }
        }
    }

    #[test]
    fn parallel_matches_sequential_bitwise() {
        let run = |parallel: bool| {
            let a = synthetic_convdiff::<f64>(8, 0.3, 0.2).unwrap();
            let mut fam = ShiftedFamily::new(a, vec![C::new(1.0, 0.0); 64], vec![Shift::real(0.0), Shift::real(0.2), Shift(C::new(1.0, 1.0)), Shift::real(3.0)]).unwrap();
            let p = Preconditioner::identity(64);
            let rep = sgmres_solve(&mut fam, &p, &SolveOptions { m: 6, parallel, ..Default::default() }).unwrap();
            (fam.x, rep.total_matvecs)
        };
        assert_eq!(run(false), run(true));
    }

    #[test]
    fn absolute_convention_still_converges() {
        let a = synthetic_convdiff::<f64>(6, 0.2, 0.0).unwrap();
        let mut fam = ShiftedFamily::new(a, vec![C::new(1.0, 0.0); 36], vec![Shift::real(0.3), Shift::real(0.6)]).unwrap();
        let p = Preconditioner::identity(36);
        let opts = SolveOptions { m: 8, convention: ShiftConvention::Absolute, ..Default::default() };
        let rep = sgmres_solve(&mut fam, &p, &opts).unwrap();
        assert!(rep.converged);
        assert!(rep.systems[1].true_relres <= 1e-7);
    }
}
