//! Harness around the shiftkrylov solvers: run configuration, single solves,
//! parameter sweeps, per-cycle diagnostics and QCD test-set download.

pub mod config;
pub mod diagnose;
pub mod fetch;
pub mod sweep;

pub use config::{parse_shift, parse_shift_list, PrecondChoice, ProblemSource, RunConfig};
pub use diagnose::{run_diagnostics, DiagRow};
pub use fetch::{fetch_qcd, FetchOptions, FetchedMatrix};
pub use sweep::{mk_sum_grid, product_grid, run_marginal, run_sweep, write_csv, MarginalRow, SweepRow};

use anyhow::Result;
use serde::Serialize;
use shiftkrylov::report::SolveReport;
use shiftkrylov::solve_sequence;

/// Report of one `solve` invocation; `members` is filled for matrix sequences.
#[derive(Clone, Debug, Serialize)]
pub struct RunOutput {
    pub config: RunConfig,
    pub report: SolveReport,
    pub members: Vec<SolveReport>,
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        0.0
    } else if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Runs the configured method `repeats` times; counters come from the first
/// run and the wall time is the median over all runs.
pub fn run_solve(config: &RunConfig) -> Result<RunOutput> {
    config.validate()?;
    let members = config.load_members()?;
    let shifts = config.shift_values()?;
    let opts = config.solve_options();
    let mut first = None;
    let mut times = Vec::with_capacity(config.repeats);
    for _ in 0..config.repeats.max(1) {
        let out = solve_sequence(config.method, &members, &shifts, config.precond.kind(), &opts)?;
        times.push(out.reports.iter().map(|r| r.wall_time_s).sum());
        first.get_or_insert(out.reports);
    }
    let reports = first.unwrap_or_default();
    let mut report = if reports.len() == 1 { reports[0].clone() } else { SolveReport::merge(config.method.name(), reports.clone()) };
    report.wall_time_s = median(times);
    let members = if reports.len() > 1 { reports } else { Vec::new() };
    Ok(RunOutput { config: config.clone(), report, members })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_of_even_and_odd() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(vec![4.0, 1.0, 2.0, 3.0]), 2.5);
        assert_eq!(median(Vec::new()), 0.0);
    }
}
