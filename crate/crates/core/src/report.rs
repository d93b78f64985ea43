//! Solver reports in double precision, independent of the working scalar type.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SystemReport {
    /// `[re, im]` of the absolute shift.
    pub shift: [f64; 2],
    /// Operator applications attributed to this system (base cycles, residual recomputations).
    pub matvecs: usize,
    pub precond_applies: usize,
    /// Cycles run with this system as the base.
    pub cycles: usize,
    /// Seed projections applied from other systems' cycles.
    pub projections: usize,
    /// Projections skipped because the projected matrix was singular.
    pub skipped_projections: usize,
    /// Projections discarded because roundoff made the residual grow.
    pub rejected_projections: usize,
    pub converged: bool,
    /// Relative residual of the maintained residual vector.
    pub relres: f64,
    /// Relative residual recomputed from the final iterate (diagnostic, not counted).
    pub true_relres: f64,
    /// Relative residual after every cycle or projection touching this system.
    pub history: Vec<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub method: String,
    pub systems: Vec<SystemReport>,
    /// All operator applications, including `setup_matvecs`.
    pub total_matvecs: usize,
    pub total_precond_applies: usize,
    /// Recycle-space rebuilds for a new matrix, reported separately.
    pub setup_matvecs: usize,
    pub setup_precond_applies: usize,
    pub recycle_dim: usize,
    pub eig_failures: usize,
    pub converged: bool,
    pub wall_time_s: f64,
}

impl SolveReport {
    /// Operator applications excluding recycle-space setup.
    pub fn solve_matvecs(&self) -> usize {
        self.total_matvecs - self.setup_matvecs
    }

    /// Concatenates reports of consecutive solves (sequence members or single-shift runs).
    pub fn merge(method: impl Into<String>, parts: Vec<SolveReport>) -> SolveReport {
        let mut out = SolveReport { method: method.into(), converged: true, ..Default::default() };
        for p in parts {
            out.total_matvecs += p.total_matvecs;
            out.total_precond_applies += p.total_precond_applies;
            out.setup_matvecs += p.setup_matvecs;
            out.setup_precond_applies += p.setup_precond_applies;
            out.recycle_dim = p.recycle_dim;
            out.eig_failures += p.eig_failures;
            out.converged &= p.converged;
            out.wall_time_s += p.wall_time_s;
            out.systems.extend(p.systems);
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
