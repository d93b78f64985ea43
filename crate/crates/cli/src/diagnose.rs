use anyhow::{bail, Result};
use serde::Serialize;
use shiftkrylov::family::CycleEvent;
use shiftkrylov::kernels::vector::norm2;
use shiftkrylov::shifted_core::{residual_decomposition_check, SearchSpace};
use shiftkrylov::shifted_gmres::sgmres_solve_observed;
use shiftkrylov::shifted_rgmres::srgmres_solve_observed;
use shiftkrylov::{Method, Preconditioner, RecycleSpace, Shift, ShiftedFamily, SolveReport};

use crate::config::RunConfig;

pub const MAX_DIAG_DIM: usize = 5000;

/// One CSV line: either a seed projection (`kind = "projection"`) or the
/// final residual history entry of a system (`kind = "history"`).
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct DiagRow {
    pub kind: String,
    pub cycle: usize,
    pub base: usize,
    pub system: usize,
    pub shift_re: f64,
    pub shift_im: f64,
    pub steps: Option<usize>,
    pub r_before: Option<f64>,
    pub r_after: Option<f64>,
    pub improvement: Option<f64>,
    pub term1: Option<f64>,
    pub term2: Option<f64>,
    /// Decomposition defect relative to `‖r_before‖`.
    pub gap: Option<f64>,
    pub relres: Option<f64>,
}

/// Re-verifies every seed projection against the two-term residual
/// decomposition on the search spaces of the cycle. Only for small problems.
pub fn run_diagnostics(cfg: &RunConfig) -> Result<(Vec<DiagRow>, SolveReport)> {
    cfg.validate()?;
    if !matches!(cfg.method, Method::Sgmres | Method::Srgmres) {
        bail!("diagnostics support sgmres and srgmres only, got {}", cfg.method);
    }
    let member = cfg.load_members()?.swap_remove(0);
    let n = member.op.nrows();
    if n > MAX_DIAG_DIM {
        bail!("diagnostics are limited to n <= {MAX_DIAG_DIM}, got {n}");
    }
    let shifts = cfg.shift_values()?;
    let p = Preconditioner::for_family(cfg.precond.kind(), &member.op, &shifts)?;
    let mut fam = ShiftedFamily::new(member.op, member.b, shifts.clone())?;
    let opts = cfg.solve_options();

    let mut rows = Vec::new();
    let mut failure: Option<anyhow::Error> = None;
    let mut cycle = 0usize;
    let mut obs = |ev: &CycleEvent<'_, f64>| {
        cycle += 1;
        let d = ev.data;
        let j = d.steps;
        let u = ev.recycle.filter(|rs| !rs.is_empty()).map(|rs| &rs.u);
        let basis = |cols: usize| match u {
            Some(u) => u.hcat(&d.v.cols(0, cols)),
            None => d.v.cols(0, cols),
        };
        for pe in ev.projections {
            let s = Shift(ev.base_shift.value() + pe.delta.value());
            let rb = norm2(&pe.r_before);
            let ra = norm2(&pe.r_after);
            let mut row = DiagRow {
                kind: "projection".into(),
                cycle,
                base: ev.base_index,
                system: pe.system,
                shift_re: shifts[pe.system].value().re,
                shift_im: shifts[pe.system].value().im,
                steps: Some(j),
                r_before: Some(rb),
                r_after: Some(ra),
                improvement: Some(rb - ra),
                ..Default::default()
            };
            if j >= 2 && rb > 0.0 {
                let check = SearchSpace::from_basis(ev.matrix, s, ev.precond, &basis(j - 1))
                    .and_then(|sm| Ok((sm, SearchSpace::from_basis(ev.matrix, s, ev.precond, &basis(j))?)))
                    .and_then(|(sm, sm1)| residual_decomposition_check(&sm, &sm1, &pe.r_before));
                match check {
                    Ok(dec) => {
                        row.term1 = Some(dec.term1_norm);
                        row.term2 = Some(dec.term2_norm);
                        row.gap = Some(dec.gap / rb);
                    }
                    Err(e) => {
                        failure.get_or_insert(e.into());
                    }
                }
            }
            rows.push(row);
        }
    };
    let report = match cfg.method {
        Method::Sgmres => sgmres_solve_observed(&mut fam, &p, &opts, Some(&mut obs))?,
        _ => srgmres_solve_observed(&mut fam, &p, RecycleSpace::empty(n), &opts, Some(&mut obs))?.0,
    };
    if let Some(e) = failure {
        return Err(e.context("decomposition check failed"));
    }
    for (l, sys) in report.systems.iter().enumerate() {
        for (c, &h) in sys.history.iter().enumerate() {
            rows.push(DiagRow {
                kind: "history".into(),
                cycle: c,
                system: l,
                shift_re: sys.shift[0],
                shift_im: sys.shift[1],
                relres: Some(h),
                ..Default::default()
            });
        }
    }
    Ok((rows, report))
}
