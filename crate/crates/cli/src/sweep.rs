use std::io::Write;

use anyhow::Result;
use serde::Serialize;
use shiftkrylov::Method;

use crate::config::RunConfig;
use crate::run_solve;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub method: String,
    pub m: usize,
    pub k: usize,
    pub total_matvecs: Option<usize>,
    pub setup_matvecs: Option<usize>,
    pub solve_matvecs: Option<usize>,
    pub converged: Option<bool>,
    pub wall_time_s: Option<f64>,
    pub error: String,
}

/// All `(m, k)` pairs of the two lists.
pub fn product_grid(ms: &[usize], ks: &[usize]) -> Vec<(usize, usize)> {
    ms.iter().flat_map(|&m| ks.iter().map(move |&k| (m, k))).collect()
}

/// Splits of a fixed `m + k` budget.
pub fn mk_sum_grid(sum: usize, ks: &[usize]) -> Vec<(usize, usize)> {
    ks.iter().filter(|&&k| k < sum).map(|&k| (sum - k, k)).collect()
}

/// Runs every method at every grid point; a failing point records its error
/// and the sweep goes on.
pub fn run_sweep(base: &RunConfig, methods: &[Method], grid: &[(usize, usize)]) -> Vec<SweepRow> {
    let mut rows = Vec::new();
    for &method in methods {
        for &(m, k) in grid {
            let k = if method.recycles() { k } else { 0 };
            if !method.recycles() && rows.iter().any(|r: &SweepRow| r.method == method.name() && r.m == m) {
                continue;
            }
            let cfg = RunConfig { method, m, k, ..base.clone() };
            let row = match run_solve(&cfg) {
                Ok(out) => SweepRow {
                    method: method.name().into(),
                    m,
                    k,
                    total_matvecs: Some(out.report.total_matvecs),
                    setup_matvecs: Some(out.report.setup_matvecs),
                    solve_matvecs: Some(out.report.solve_matvecs()),
                    converged: Some(out.report.converged),
                    wall_time_s: Some(out.report.wall_time_s),
                    error: String::new(),
                },
                Err(e) => SweepRow {
                    method: method.name().into(),
                    m,
                    k,
                    total_matvecs: None,
                    setup_matvecs: None,
                    solve_matvecs: None,
                    converged: None,
                    wall_time_s: None,
                    error: format!("{e:#}"),
                },
            };
            rows.push(row);
        }
    }
    rows
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MarginalRow {
    pub method: String,
    pub shifts: usize,
    pub total_matvecs: usize,
    /// Increase over the run with one shift fewer.
    pub delta: i64,
}

/// Solves with the first `i` shifts for `i = 1..=L` and records the matvec
/// increase per added shift.
pub fn run_marginal(base: &RunConfig, methods: &[Method]) -> Result<Vec<MarginalRow>> {
    let mut rows = Vec::new();
    for &method in methods {
        let mut prev = 0i64;
        for i in 1..=base.shifts.len() {
            let cfg = RunConfig { method, shifts: base.shifts[..i].to_vec(), repeats: 1, ..base.clone() };
            let total = run_solve(&cfg)?.report.total_matvecs;
            rows.push(MarginalRow { method: method.name().into(), shifts: i, total_matvecs: total, delta: total as i64 - prev });
            prev = total as i64;
        }
    }
    Ok(rows)
}

pub fn write_csv<R: Serialize>(rows: &[R], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
