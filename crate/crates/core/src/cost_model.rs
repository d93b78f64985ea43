//! Closed-form FLOP overheads of the shifted solvers relative to their
//! unshifted counterparts, per iteration, with parameter sweeps.

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// `m`: cycle length, `k`: recycle dimension, `l`: number of shifts,
/// `n`: problem dimension, `j_new`: total iterations used to amortize one-time work.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CostParams {
    pub m: f64,
    pub k: f64,
    pub l: f64,
    pub n: f64,
    pub j_new: f64,
}

impl CostParams {
    pub fn new(m: f64, k: f64, l: f64, n: f64, j_new: f64) -> Result<Self> {
        let p = CostParams { m, k, l, n, j_new };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.m >= 1.0 && self.k >= 0.0 && self.l >= 0.0 && self.n >= 1.0 && self.j_new > 0.0) {
            return Err(Error::InvalidArgument(format!("invalid cost parameters {self:?}")));
        }
        Ok(())
    }
}

/// Extra FLOPs per iteration of shifted GMRES over GMRES:
/// `(2/3)(L+3)m² + 2m(2L+n+1) + 6Ln + n`.
pub fn d_sgmres(p: &CostParams) -> f64 {
    let CostParams { m, l, n, .. } = *p;
    2.0 / 3.0 * (l + 3.0) * m * m + 2.0 * m * (2.0 * l + n + 1.0) + 6.0 * l * n + n
}

/// Per-iteration and one-time coefficients `(a, b)` of the shifted recycled
/// GMRES overhead `a + b/j_new`.
pub fn d_srgmres_split(p: &CostParams) -> (f64, f64) {
    let CostParams { m, k, l, n, .. } = *p;
    let a = (1.0 + 5.0 * l / 3.0) * m * m
        + (2.0 + 3.0 * k + 3.0 * l + 5.0 * k * l + 2.0 * n) * m
        + 1.0
        + 4.0 * k
        + 3.0 * k * k
        + 4.0 * l
        + 6.0 * k * l
        + 5.0 * k * k * l
        + n
        + 3.0 * k * n
        + 6.0 * l * n
        + (5.0 * k.powi(3) * l / 3.0 + k.powi(3) + 3.0 * k * k * l + 2.0 * k * k * n + 2.0 * k * k + 6.0 * k * l * n + 4.0 * k * l + k * n + k) / m;
    let b = k.powi(3) + 2.0 * k * k * n + (k.powi(3) + 2.0 * k * k / 3.0) * l + 6.0 * k * l * n + 3.0 * k * l;
    (a, b)
}

/// Extra FLOPs per iteration of shifted recycled GMRES over recycled GMRES.
pub fn d_srgmres(p: &CostParams) -> f64 {
    let (a, b) = d_srgmres_split(p);
    a + b / p.j_new
}

/// The same overhead specialised to `k = m/2`.
pub fn d_srgmres_half(m: f64, l: f64, n: f64, j: f64) -> f64 {
    m.powi(3) * (l / (8.0 * j) + 1.0 / (8.0 * j))
        + m * m * (l / (6.0 * j) + 45.0 * l / 8.0 + n / (2.0 * j) + 27.0 / 8.0)
        + m * (3.0 * l * n / j + 3.0 * l / (2.0 * j) + 27.0 * l / 4.0 + 4.0 * n + 9.0 / 2.0)
        + 3.0 / 2.0
        + 6.0 * l
        + 3.0 * n / 2.0
        + 9.0 * l * n
}

/// Per-iteration overhead of shifted GMRES summed from the individual
/// operations of one cycle and divided by `m`.
pub fn sgmres_line_items(p: &CostParams) -> f64 {
    let CostParams { m, l, n, .. } = *p;
    let once = (m.powi(3) + m * m) + n * (m * m + m) + (m.powi(3) + m * m) + n * m * m;
    let per_shift = 3.0 * m * m + 2.0 * n * m + (2.0 / 3.0 * m.powi(3) + m * m) + 2.0 * m * n + 2.0 * m * n;
    (once + l * per_shift) / m
}

/// `(a, b)` for shifted recycled GMRES summed from the individual operations:
/// per-cycle work divided by `m`, and the one-time work to be divided by `j_new`.
pub fn srgmres_line_items(p: &CostParams) -> (f64, f64) {
    let CostParams { m, k, l, n, .. } = *p;
    let d = m + k;
    let once = (d + 1.0).powi(2) * d
        + k * k * n
        + k * n * m
        + m * m * n
        + k * k * n
        + k * n * m
        + k * n * (m + 1.0)
        + n * m * (m + 1.0);
    let per_shift = (d + 1.0).powi(2) * d + 3.0 * d + 2.0 * d * n + (2.0 / 3.0 * d.powi(3) + d * d) + 2.0 * d * n + 2.0 * d * n;
    let setup_once = k.powi(3) + k * k * n + k * k * n;
    let setup_shift = 3.0 * k + 2.0 * k * n + (k.powi(3) + 2.0 / 3.0 * k * k) + 2.0 * k * n + 2.0 * k * n;
    ((once + l * per_shift) / m, setup_once + l * setup_shift)
}

/// Model for the total iteration count, `n / 10^((4/9 + 2m/(9m+9))·log₁₀ n)`.
/// Tends to 100 at `n = 10⁶` as `m → ∞`.
pub fn j_new_model(n: f64, m: f64) -> f64 {
    n / 10f64.powf((4.0 / 9.0 + 2.0 * m / (9.0 * m + 9.0)) * n.log10())
}

/// `d_srgmres(k = 0, j_new → ∞) − d_sgmres = (L−1)m² − Lm + 1 + 4L`.
pub fn k0_difference(m: f64, l: f64) -> f64 {
    (l - 1.0) * m * m - l * m + 1.0 + 4.0 * l
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepVar {
    L,
    N,
    M,
}

/// How `j_new` is chosen at each sweep point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum JNew {
    Model,
    Fixed(f64),
}

/// Values held constant for the parameters not being swept.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepBase {
    pub l: f64,
    pub n: f64,
    pub m: f64,
}

impl Default for SweepBase {
    fn default() -> Self {
        SweepBase { l: 5.0, n: 1e7, m: 100.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub param: f64,
    pub d_sgmres: f64,
    pub d_srgmres: f64,
}

/// Evaluates both overheads along one parameter, with `k = m/2` for the
/// recycled method.
pub fn sweep(var: SweepVar, values: &[f64], base: SweepBase, j: JNew) -> Result<Vec<SweepRow>> {
    values
        .iter()
        .map(|&v| {
            let (l, n, m) = match var {
                SweepVar::L => (v, base.n, base.m),
                SweepVar::N => (base.l, v, base.m),
                SweepVar::M => (base.l, base.n, v),
            };
            let j_new = match j {
                JNew::Model => j_new_model(n, m),
                JNew::Fixed(j) => j,
            };
            let p = CostParams::new(m, m / 2.0, l, n, j_new)?;
            Ok(SweepRow { param: v, d_sgmres: d_sgmres(&p), d_srgmres: d_srgmres(&p) })
        })
        .collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from("param,d_sgmres,d_srgmres\n");
    for r in rows {
        let _ = writeln!(s, "{:.5e},{:.5e},{:.5e}", r.param, r.d_sgmres, r.d_srgmres);
    }
    s
}
