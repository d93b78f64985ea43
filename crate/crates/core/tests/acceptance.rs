//! Acceptance suite. Prints one PASS/FAIL/SKIP line per criterion and exits
//! nonzero when any criterion fails.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shiftkrylov::cost_model::{d_srgmres_split, j_new_model, srgmres_line_items, CostParams};
use shiftkrylov::family::{CycleEvent, SolveOptions};
use shiftkrylov::gmres::{gmres_cycle, restarted_gmres, ArnoldiData};
use shiftkrylov::kernels::hermitian_solve;
use shiftkrylov::kernels::vector::{norm2, sub};
use shiftkrylov::operator::ShiftedOperator;
use shiftkrylov::precond::ilu0_factor;
use shiftkrylov::problems::{qcd_base_matrix, read_matrix_market, rhs_sequence, synthetic_convdiff, FixtureMetadata};
use shiftkrylov::rgmres::{initial_projection, rgmres_cycle, rgmres_solve, AugmentedArnoldiData};
use shiftkrylov::shifted_core::{project_minres, residual_decomposition_check, SearchSpace};
use shiftkrylov::shifted_gmres::{assemble_n_sigma, project_shift, sgmres_solve, sgmres_solve_observed, ProjectionCache};
use shiftkrylov::shifted_rgmres::{
    assemble_n_sigma_aug, aug_rhs_full, aug_rhs_simplified, initial_shift_projection, project_shift_aug, srgmres_solve, srgmres_solve_observed,
    AugmentedProjectionCache, InitialProjectionCache,
};
use shiftkrylov::{
    solve_family, Complex64, DenseMatrix64, Method, PrecondKind, Preconditioner, Preconditioner64, RecycleSpace, Shift, ShiftedFamily64, SparseOperator64,
};

const ORACLE_RTOL: f64 = 1e-10;
const ORACLE_INSTANCES: usize = 60;
const ORACLE_TIME_LIMIT_S: f64 = 60.0;
const ARNOLDI_TOL: f64 = 1e-10;
const SHIFTED_ARNOLDI_TOL: f64 = 1e-10;
const AUG_ARNOLDI_TOL: f64 = 1e-9;
const DECOMP_GAP_TOL: f64 = 1e-10;
const K0_TOL: f64 = 1e-12;
const CANCEL_TOL: f64 = 1e-10;
const SIMPLIFIED_Y_TOL: f64 = 1e-12;
const DESK_TIME_LIMIT_S: f64 = 120.0;
const COST_COEFF_RTOL: f64 = 0.10;
const J_NEW_LIMIT_TOL: f64 = 1.0;
const QCD_TREND_SLACK: f64 = 1.05;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Pass,
    Fail,
    Skip,
}

struct Line {
    id: &'static str,
    status: Status,
    detail: String,
}

fn line(id: &'static str, ok: bool, detail: String) -> Line {
    Line { id, status: if ok { Status::Pass } else { Status::Fail }, detail }
}

type C = Complex64;

fn zeros(n: usize) -> Vec<C> {
    vec![C::new(0.0, 0.0); n]
}

fn rvec(rng: &mut ChaCha8Rng, n: usize) -> Vec<C> {
    (0..n).map(|_| C::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect()
}

fn banded(n: usize, rng: &mut ChaCha8Rng) -> SparseOperator64 {
    let mut t = Vec::new();
    let far = 2 + rng.random_range(0..8usize);
    for i in 0..n {
        t.push((i, i, C::new(3.0 + rng.random::<f64>(), rng.random::<f64>() - 0.5)));
        for off in [1, far] {
            if i + off < n {
                t.push((i, i + off, C::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)));
                t.push((i + off, i, C::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)));
            }
        }
    }
    SparseOperator64::from_triplets(n, n, &t).unwrap()
}

fn rel(a: &[C], b: &[C], scale: f64) -> f64 {
    norm2(&sub(a, b)) / scale
}

#[derive(Default)]
struct SuiteStats {
    instances: usize,
    with_recycling: usize,
    worst_plain: f64,
    worst_initial: f64,
    worst_aug: f64,
    projections: usize,
    monotone_violations: usize,
    worst_cancel: f64,
    worst_y: f64,
    seconds: f64,
}

/// Randomized projections against the explicit-basis minimum-residual oracle.
fn randomized_suite() -> SuiteStats {
    let start = Instant::now();
    let mut st = SuiteStats::default();
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    for _ in 0..ORACLE_INSTANCES {
        let n = rng.random_range(40..=200);
        let m = rng.random_range(5..=20);
        let k = rng.random_range(0..=8);
        let mag = 10f64.powf(rng.random_range(-3.0..=3.0));
        let phase = rng.random_range(-std::f64::consts::FRAC_PI_2..=std::f64::consts::FRAC_PI_2);
        let sigma = Shift(C::from_polar(mag, phase));
        let a = banded(n, &mut rng);
        let p = if rng.random::<bool>() { ilu0_factor(&a).unwrap() } else { Preconditioner64::identity(n) };
        let op = ShiftedOperator::new(&a, Shift::zero(), &p);
        let b = rvec(&mut rng, n);
        let bn = norm2(&b);
        st.instances += 1;

        let cyc = gmres_cycle(&op, &zeros(n), &b, m, 0.0).unwrap();
        let j = cyc.data.steps;
        let (_, r) = project_shift(&cyc.data, &ProjectionCache::new(&cyc.data), sigma, &zeros(n), &b).unwrap();
        let oracle = SearchSpace::from_basis(&a, sigma, &p, &cyc.data.v.cols(0, j)).unwrap();
        let (_, ro) = project_minres(&oracle, &zeros(n), &b).unwrap();
        st.worst_plain = st.worst_plain.max(rel(&r, &ro, bn));
        st.projections += 1;
        st.monotone_violations += usize::from(norm2(&r) > bn);

        if k == 0 {
            continue;
        }
        st.with_recycling += 1;
        let u = DenseMatrix64::from_cols(n, &(0..k).map(|_| rvec(&mut rng, n)).collect::<Vec<_>>());
        let rs = RecycleSpace::from_directions(&op, &u).unwrap();
        let (bx0, br0) = initial_projection(&rs, &zeros(n), &b);
        let acyc = rgmres_cycle(&op, &bx0, &br0, &rs, m, 0.0).unwrap();

        let (x0, r0) = initial_shift_projection(&rs, &InitialProjectionCache::new(&rs), sigma, &zeros(n), &b).unwrap();
        let init_oracle = SearchSpace::from_basis(&a, sigma, &p, &rs.u).unwrap();
        let (_, r0o) = project_minres(&init_oracle, &zeros(n), &b).unwrap();
        st.worst_initial = st.worst_initial.max(rel(&r0, &r0o, bn));
        st.projections += 1;
        st.monotone_violations += usize::from(norm2(&r0) > bn);

        let cache = AugmentedProjectionCache::new(&acyc.data, &rs);
        let (_, ra) = project_shift_aug(&acyc.data, &rs, &cache, sigma, &x0, &r0, true).unwrap();
        let ja = acyc.data.arnoldi.steps;
        let aug_oracle = SearchSpace::from_basis(&a, sigma, &p, &rs.u.hcat(&acyc.data.arnoldi.v.cols(0, ja))).unwrap();
        let (_, rao) = project_minres(&aug_oracle, &x0, &r0).unwrap();
        let r0n = norm2(&r0);
        st.worst_aug = st.worst_aug.max(rel(&ra, &rao, r0n));
        st.projections += 1;
        st.monotone_violations += usize::from(norm2(&ra) > r0n);

        let full = aug_rhs_full(&cache, sigma, &r0);
        let simple = aug_rhs_simplified(&acyc.data, &rs, sigma, &r0);
        let cancel = full[..rs.dim()].iter().map(|z| z.norm()).fold(0.0, f64::max) / r0n;
        st.worst_cancel = st.worst_cancel.max(cancel);
        let nmat = assemble_n_sigma_aug(&cache, sigma);
        let yf = hermitian_solve(&nmat, &full).unwrap();
        let ys = hermitian_solve(&nmat, &simple).unwrap();
        st.worst_y = st.worst_y.max(rel(&yf, &ys, norm2(&yf)));
    }
    st.seconds = start.elapsed().as_secs_f64();
    st
}

fn criterion1(st: &SuiteStats) -> Line {
    let worst = st.worst_plain.max(st.worst_initial).max(st.worst_aug);
    line(
        "1 oracle equivalence",
        st.instances >= 50 && worst <= ORACLE_RTOL && st.seconds < ORACLE_TIME_LIMIT_S,
        format!(
            "{} instances ({} recycled); max rel diff plain {:.2e}, initial {:.2e}, augmented {:.2e} (tol {ORACLE_RTOL:.0e}); {:.1} s (limit {ORACLE_TIME_LIMIT_S} s)",
            st.instances, st.with_recycling, st.worst_plain, st.worst_initial, st.worst_aug, st.seconds
        ),
    )
}

fn arnoldi_defect(a: &SparseOperator64, shift: Shift<f64>, p: &Preconditioner64, d: &ArnoldiData<f64>) -> f64 {
    let j = d.steps;
    if j == 0 {
        return 0.0;
    }
    let lhs = DenseMatrix64::from_cols(a.nrows(), &(0..j).map(|c| a.spmv(&p.apply_inverse(d.v.col(c)).unwrap(), shift).unwrap()).collect::<Vec<_>>());
    lhs.sub(&d.image()).norm_fro() / d.h.norm_fro()
}

fn desk_family(shifts: &[f64]) -> (SparseOperator64, ShiftedFamily64) {
    let a = synthetic_convdiff::<f64>(20, 0.5, 0.1).unwrap();
    let b = rhs_sequence::<f64>(400, 1, 1, true).remove(0);
    let fam = ShiftedFamily64::new(a.clone(), b, shifts.iter().map(|&s| Shift::real(s)).collect()).unwrap();
    (a, fam)
}

const DESK_SHIFTS: [f64; 4] = [0.01, 0.05, 0.5, 1.0];

fn criterion2() -> Line {
    let mut arnoldi = 0.0f64;
    let mut shifted = 0.0f64;
    let mut aug = 0.0f64;
    let mut gap = 0.0f64;
    let mut cycles = 0usize;
    let mut decomps = 0usize;

    let (a, mut fam) = desk_family(&DESK_SHIFTS);
    let pid = Preconditioner64::identity(400);
    let opts = SolveOptions { m: 30, eps: 1e-8, ..Default::default() };
    let mut obs = |ev: &CycleEvent<'_, f64>| {
        cycles += 1;
        let d = ev.data;
        arnoldi = arnoldi.max(arnoldi_defect(ev.matrix, ev.base_shift, ev.precond, d));
        let j = d.steps;
        for pe in ev.projections {
            let s = Shift(ev.base_shift.value() + pe.delta.value());
            let mut hs = d.h.clone();
            for i in 0..j {
                hs[(i, i)] += pe.delta.value();
            }
            let lhs = DenseMatrix64::from_cols(400, &(0..j).map(|c| ev.matrix.spmv(d.v.col(c), s).unwrap()).collect::<Vec<_>>());
            shifted = shifted.max(lhs.sub(&d.v.matmul(&hs)).norm_fro() / hs.norm_fro());
            if j >= 2 {
                let sm = SearchSpace::from_basis(ev.matrix, s, ev.precond, &d.v.cols(0, j - 1)).unwrap();
                let sm1 = SearchSpace::from_basis(ev.matrix, s, ev.precond, &d.v.cols(0, j)).unwrap();
                let dec = residual_decomposition_check(&sm, &sm1, &pe.r_before).unwrap();
                gap = gap.max(dec.gap / norm2(&pe.r_before));
                decomps += 1;
            }
        }
    };
    let rep = sgmres_solve_observed(&mut fam, &pid, &opts, Some(&mut obs)).unwrap();

    let (_, mut fam) = desk_family(&DESK_SHIFTS);
    let p = Preconditioner::for_family(PrecondKind::Ilu0, &a, &fam.shifts).unwrap();
    let opts = SolveOptions { m: 30, k: 10, eps: 1e-8, ..Default::default() };
    let mut obs = |ev: &CycleEvent<'_, f64>| {
        cycles += 1;
        let rs = ev.recycle.unwrap();
        if rs.is_empty() {
            arnoldi = arnoldi.max(arnoldi_defect(ev.matrix, ev.base_shift, ev.precond, ev.data));
            return;
        }
        if ev.data.steps == 0 {
            return;
        }
        let data = AugmentedArnoldiData { arnoldi: ev.data.clone(), b: ev.b.unwrap().clone() };
        let g = data.g();
        let uv = rs.u.hcat(&ev.data.v.cols(0, ev.data.steps));
        let lhs = DenseMatrix64::from_cols(
            400,
            &(0..uv.ncols()).map(|c| ev.matrix.spmv(&ev.precond.apply_inverse(uv.col(c)).unwrap(), ev.base_shift).unwrap()).collect::<Vec<_>>(),
        );
        aug = aug.max(lhs.sub(&rs.c.hcat(&ev.data.v).matmul(&g)).norm_fro() / g.norm_fro());
    };
    let (rep2, _) = srgmres_solve_observed(&mut fam, &p, RecycleSpace::empty(400), &opts, Some(&mut obs)).unwrap();

    let ok = arnoldi <= ARNOLDI_TOL && shifted <= SHIFTED_ARNOLDI_TOL && aug <= AUG_ARNOLDI_TOL && gap <= DECOMP_GAP_TOL && decomps > 0 && rep.converged && rep2.converged;
    line(
        "2 structural identities",
        ok,
        format!(
            "{cycles} cycles, {decomps} decompositions; arnoldi {arnoldi:.2e} (tol {ARNOLDI_TOL:.0e}), shifted {shifted:.2e} (tol {SHIFTED_ARNOLDI_TOL:.0e}), augmented {aug:.2e} (tol {AUG_ARNOLDI_TOL:.0e}), gap {gap:.2e} (tol {DECOMP_GAP_TOL:.0e})"
        ),
    )
}

fn criterion3(st: &SuiteStats) -> Line {
    let mut solver_events = 0usize;
    let mut solver_violations = 0usize;
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for inst in 0..10 {
        let n = rng.random_range(40..=200);
        let a = banded(n, &mut rng);
        let shifts: Vec<Shift<f64>> = (0..4).map(|_| Shift(C::from_polar(10f64.powf(rng.random_range(-3.0..=3.0)), rng.random_range(-1.5..=1.5)))).collect();
        let b = rvec(&mut rng, n);
        let p = ilu0_factor(&a).unwrap();
        let mut fam = ShiftedFamily64::new(a, b, shifts).unwrap();
        let opts = SolveOptions { m: rng.random_range(5..=20), k: rng.random_range(0..=8), eps: 1e-10, ..Default::default() };
        let mut obs = |ev: &CycleEvent<'_, f64>| {
            for pe in ev.projections {
                solver_events += 1;
                solver_violations += usize::from(norm2(&pe.r_after) > norm2(&pe.r_before));
            }
        };
        if inst % 2 == 0 {
            sgmres_solve_observed(&mut fam, &p, &opts, Some(&mut obs)).unwrap();
        } else {
            srgmres_solve_observed(&mut fam, &p, RecycleSpace::empty(n), &opts, Some(&mut obs)).unwrap();
        }
    }
    line(
        "3 monotonicity",
        st.monotone_violations == 0 && solver_violations == 0,
        format!(
            "{} raw violations over {} suite projections; {solver_violations} over {solver_events} in-solver projections",
            st.monotone_violations, st.projections
        ),
    )
}

fn criterion4() -> Line {
    let a = synthetic_convdiff::<f64>(12, 0.4, 0.2).unwrap();
    let p = ilu0_factor(&a).unwrap();
    let b = rhs_sequence::<f64>(144, 1, 2, true).remove(0);
    let s = Shift::real(0.05);
    let opts = SolveOptions { m: 8, k: 4, eps: 1e-10, ..Default::default() };

    let mut fam = ShiftedFamily64::new(a.clone(), b.clone(), vec![s]).unwrap();
    let rep = sgmres_solve(&mut fam, &p, &opts).unwrap();
    let op = ShiftedOperator::new(&a, s, &p);
    let g = restarted_gmres(&op, &zeros(144), &b, opts.m, opts.eps, opts.max_cycles).unwrap();
    let gmres_same = fam.x[0] == g.x && rep.total_matvecs == g.matvecs && rep.systems[0].cycles == g.cycles;

    let mut fam = ShiftedFamily64::new(a.clone(), b.clone(), vec![s]).unwrap();
    let (rep, rs) = srgmres_solve(&mut fam, &p, RecycleSpace::empty(144), &opts).unwrap();
    let op = ShiftedOperator::new(&a, s, &p);
    let r = rgmres_solve(&op, &zeros(144), &b, RecycleSpace::empty(144), opts.m, opts.k, opts.eps, opts.max_cycles).unwrap();
    let rgmres_same = fam.x[0] == r.x && rep.total_matvecs == r.matvecs && rep.systems[0].cycles == r.cycles && rs.c == r.recycle.c;

    let mut k0 = 0.0f64;
    let op = ShiftedOperator::new(&a, s, &p);
    let mut x = zeros(144);
    let mut res = b.clone();
    let empty = RecycleSpace::empty(144);
    for delta in [C::new(0.3, 0.0), C::new(0.01, 2.0), C::new(50.0, -1.0)] {
        let cyc = gmres_cycle(&op, &x, &res, opts.m, 0.0).unwrap();
        let data = AugmentedArnoldiData { arnoldi: cyc.data.clone(), b: DenseMatrix64::zeros(0, cyc.data.steps) };
        let d = Shift(delta);
        let cache = ProjectionCache::new(&cyc.data);
        let acache = AugmentedProjectionCache::new(&data, &empty);
        let n1 = assemble_n_sigma(&cache, d);
        k0 = k0.max(assemble_n_sigma_aug(&acache, d).sub(&n1).max_abs() / n1.max_abs());
        let (x1, r1) = project_shift(&cyc.data, &cache, d, &zeros(144), &b).unwrap();
        let (x2, r2) = project_shift_aug(&data, &empty, &acache, d, &zeros(144), &b, false).unwrap();
        k0 = k0.max(rel(&r1, &r2, norm2(&b))).max(rel(&x1, &x2, norm2(&x1)));
        x = cyc.x;
        res = cyc.r;
    }
    line(
        "4 degeneracy",
        gmres_same && rgmres_same && k0 <= K0_TOL,
        format!("single-shift sgmres == restarted GMRES: {gmres_same}; single-shift srgmres == recycled GMRES: {rgmres_same}; k=0 per-cycle max rel diff {k0:.2e} (tol {K0_TOL:.0e})"),
    )
}

fn criterion5(st: &SuiteStats) -> Line {
    line(
        "5 simplified-rhs cancellation",
        st.with_recycling > 0 && st.worst_cancel <= CANCEL_TOL && st.worst_y <= SIMPLIFIED_Y_TOL,
        format!(
            "{} instances with k >= 1; max first-block |.|/||r0|| {:.2e} (tol {CANCEL_TOL:.0e}); max rel y diff {:.2e} (tol {SIMPLIFIED_Y_TOL:.0e})",
            st.with_recycling, st.worst_cancel, st.worst_y
        ),
    )
}

fn criterion6() -> Line {
    let start = Instant::now();
    let mut totals = Vec::new();
    let mut converged = true;
    for method in Method::ALL {
        let (a, mut fam) = desk_family(&DESK_SHIFTS);
        let p = Preconditioner::for_family(PrecondKind::Ilu0, &a, &fam.shifts).unwrap();
        let opts = SolveOptions { m: 30, k: 10, eps: 1e-8, ..Default::default() };
        let (rep, _) = solve_family(method, &mut fam, &p, &opts, RecycleSpace::empty(400)).unwrap();
        converged &= rep.converged;
        totals.push(rep.total_matvecs);
    }
    let secs = start.elapsed().as_secs_f64();
    line(
        "6 seed-projection benefit",
        converged && totals[0] < totals[2] && totals[1] < totals[3] && secs < DESK_TIME_LIMIT_S,
        format!(
            "total matvecs sgmres {} vs seq-gmres {}, srgmres {} vs seq-rgmres {}; all converged: {converged}; {secs:.1} s (limit {DESK_TIME_LIMIT_S} s)",
            totals[0], totals[2], totals[1], totals[3]
        ),
    )
}

fn within(value: f64, target: f64) -> bool {
    (value / target - 1.0).abs() <= COST_COEFF_RTOL
}

fn criterion7() -> Vec<Line> {
    let (target_a, target_b) = (1.3e6, 2.0e6);
    let p = CostParams::new(40.0, 5.0, 5.0, 1e5, 1.0).unwrap();
    let (a, b) = srgmres_line_items(&p);
    let (fa, fb) = d_srgmres_split(&p);
    let main = line(
        "7 cost model coefficients (n=1e5)",
        within(a, target_a) && within(b, target_b),
        format!("line items give {a:.4e} + {b:.4e}/j_new, closed form {fa:.4e} + {fb:.4e}/j_new; expected {target_a:.1e} + {target_b:.1e}/j_new within {COST_COEFF_RTOL}"),
    );
    let p = CostParams::new(40.0, 5.0, 5.0, 1e4, 1.0).unwrap();
    let (a4, b4) = srgmres_line_items(&p);
    let side = line(
        "7 cost model coefficients (n=1e4, supplementary)",
        within(a4, target_a) && within(b4, target_b),
        format!("line items give {a4:.4e} + {b4:.4e}/j_new"),
    );
    let j = j_new_model(1e6, 1e12);
    let limit = line("7 j_new limit", (j - 100.0).abs() <= J_NEW_LIMIT_TOL, format!("j_new(n=1e6, m=1e12) = {j:.4} (target 100 +- {J_NEW_LIMIT_TOL})"));
    vec![main, side, limit]
}

fn qcd_dir() -> Option<PathBuf> {
    let dir = PathBuf::from(std::env::var_os("SHIFTKRYLOV_QCD_DIR")?);
    dir.is_dir().then_some(dir)
}

fn criterion8() -> Line {
    let id = "8 qcd reproduction";
    let Some(dir) = qcd_dir() else {
        return Line { id, status: Status::Skip, detail: "SHIFTKRYLOV_QCD_DIR not set; small QCD set unavailable".into() };
    };
    let mut mtx: Vec<PathBuf> = std::fs::read_dir(&dir).into_iter().flatten().flatten().map(|e| e.path()).filter(|p| p.extension().is_some_and(|e| e == "mtx")).collect();
    mtx.sort();
    let Some(path) = mtx.into_iter().find(|p| p.with_extension("json").is_file()) else {
        return Line { id, status: Status::Skip, detail: format!("no matrix with metadata in {}", dir.display()) };
    };
    let meta = match FixtureMetadata::read(path.with_extension("json")) {
        Ok(m) => m,
        Err(e) => return line(id, false, format!("metadata: {e}")),
    };
    let d: SparseOperator64 = match read_matrix_market(&path) {
        Ok(d) => d,
        Err(e) => return line(id, false, format!("matrix: {e}")),
    };
    let a = qcd_base_matrix(&d, meta.kappa_c).unwrap();
    let shifts: Vec<Shift<f64>> = [0.01, 0.02, 0.03, 1.0, 2.0, 3.0].iter().map(|&s| Shift::real(s)).collect();
    let b = rhs_sequence::<f64>(a.nrows(), 1, 1, true).remove(0);
    let p = Preconditioner::for_family(PrecondKind::Ilu0, &a, &shifts).unwrap();
    let mut totals = Vec::new();
    let mut converged = true;
    for k in [5, 15, 25] {
        let mut fam = ShiftedFamily64::new(a.clone(), b.clone(), shifts.clone()).unwrap();
        let opts = SolveOptions { m: 35, k, eps: 1e-8, ..Default::default() };
        let (rep, _) = srgmres_solve(&mut fam, &p, RecycleSpace::empty(a.nrows()), &opts).unwrap();
        converged &= rep.converged;
        totals.push(rep.total_matvecs);
    }
    let trend = totals.windows(2).all(|w| w[1] as f64 <= w[0] as f64 * QCD_TREND_SLACK) && totals[2] < totals[0];
    line(id, converged && trend, format!("{}: total matvecs for k=5,15,25 at m=35: {totals:?}; all converged: {converged}", meta.name))
}

fn main() -> ExitCode {
    let suite = randomized_suite();
    let mut lines = vec![criterion1(&suite), criterion2(), criterion3(&suite), criterion4(), criterion5(&suite), criterion6()];
    lines.extend(criterion7());
    lines.push(criterion8());
    let mut failed = 0;
    for l in &lines {
        let tag = match l.status {
            Status::Pass => "PASS",
            Status::Fail => {
                failed += 1;
                "FAIL"
            }
            Status::Skip => "SKIP",
        };
        println!("{tag} criterion {}: {}", l.id, l.detail);
    }
    println!("acceptance: {} passed, {failed} failed, {} skipped", lines.iter().filter(|l| l.status == Status::Pass).count(), lines.iter().filter(|l| l.status == Status::Skip).count());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
