use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use shiftkrylov::problems::{qcd_base_matrix, read_matrix_market, rhs_sequence, synthetic_convdiff, FixtureMetadata};
use shiftkrylov::{Complex64, Method, PrecondKind, SequenceMember, Shift, ShiftConvention, SolveOptions, SparseOperator64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum PrecondChoice {
    None,
    Ilu0,
}

impl PrecondChoice {
    pub fn kind(self) -> PrecondKind {
        match self {
            PrecondChoice::None => PrecondKind::Identity,
            PrecondChoice::Ilu0 => PrecondKind::Ilu0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum ProblemSource {
    /// One or more Matrix Market files solved as a sequence. A matrix with a
    /// `.json` metadata sidecar, or any matrix when `kappa_c` is given, is
    /// turned into `(1/κ_c + 10⁻³)I − D`.
    Matrix { paths: Vec<PathBuf>, kappa_c: Option<f64>, raw: bool },
    Synthetic { nx: usize, peclet: f64, rotation: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub method: Method,
    pub m: usize,
    pub k: usize,
    pub eps: f64,
    pub max_cycles: usize,
    /// `[re, im]` per shift.
    pub shifts: Vec<[f64; 2]>,
    pub problem: ProblemSource,
    pub precond: PrecondChoice,
    pub seed: u64,
    pub shift_convention: ShiftConvention,
    pub parallel: bool,
    pub repeats: usize,
    pub complex_rhs: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            method: Method::Sgmres,
            m: 30,
            k: 10,
            eps: 1e-8,
            max_cycles: 500,
            shifts: vec![[0.0, 0.0]],
            problem: ProblemSource::Synthetic { nx: 20, peclet: 0.5, rotation: 0.1 },
            precond: PrecondChoice::Ilu0,
            seed: 1,
            shift_convention: ShiftConvention::Relative,
            parallel: false,
            repeats: 3,
            complex_rhs: true,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0) {
            bail!("eps must be positive, got {}", self.eps);
        }
        if self.m < 1 {
            bail!("m must be at least 1");
        }
        if self.shifts.is_empty() {
            bail!("at least one shift is required");
        }
        if let ProblemSource::Matrix { paths, .. } = &self.problem {
            if paths.is_empty() {
                bail!("no matrix given");
            }
        }
        Ok(())
    }

    pub fn shift_values(&self) -> Result<Vec<Shift<f64>>> {
        self.shifts.iter().map(|s| Shift::new(Complex64::new(s[0], s[1])).map_err(Into::into)).collect()
    }

    pub fn solve_options(&self) -> SolveOptions {
        SolveOptions {
            m: self.m,
            k: if self.method.recycles() { self.k } else { 0 },
            eps: self.eps,
            max_cycles: self.max_cycles,
            convention: self.shift_convention,
            parallel: self.parallel,
        }
    }

    pub fn load_operators(&self) -> Result<Vec<SparseOperator64>> {
        match &self.problem {
            ProblemSource::Synthetic { nx, peclet, rotation } => Ok(vec![synthetic_convdiff(*nx, *peclet, *rotation)?]),
            ProblemSource::Matrix { paths, kappa_c, raw } => paths
                .iter()
                .map(|p| {
                    let d: SparseOperator64 = read_matrix_market(p).with_context(|| format!("reading {}", p.display()))?;
                    if *raw {
                        return Ok(d);
                    }
                    let sidecar = p.with_extension("json");
                    let kc = match kappa_c {
                        Some(k) => Some(*k),
                        None if sidecar.is_file() => Some(FixtureMetadata::read(&sidecar).with_context(|| format!("reading {}", sidecar.display()))?.kappa_c),
                        None => None,
                    };
                    Ok(match kc {
                        Some(k) => qcd_base_matrix(&d, k)?,
                        None => d,
                    })
                })
                .collect(),
        }
    }

    /// Sequence members with right-hand sides `b₁ = 1`, `b_i = b_{i−1} + d_i`.
    pub fn load_members(&self) -> Result<Vec<SequenceMember<f64>>> {
        let ops = self.load_operators()?;
        let n = ops[0].nrows();
        if ops.iter().any(|a| a.nrows() != n || !a.is_square()) {
            bail!("all matrices of a sequence must be square with the same dimension");
        }
        let bs = rhs_sequence::<f64>(n, ops.len(), self.seed, self.complex_rhs);
        Ok(ops.into_iter().zip(bs).map(|(op, b)| SequenceMember { op, b }).collect())
    }

    pub fn problem_dim(&self) -> Result<usize> {
        Ok(match &self.problem {
            ProblemSource::Synthetic { nx, .. } => nx * nx,
            ProblemSource::Matrix { .. } => self.load_operators()?[0].nrows(),
        })
    }
}

/// Parses `a`, `bi`, `a+bi` or `a-bi` (also `i`, `-i`, exponents allowed).
pub fn parse_shift(s: &str) -> Result<[f64; 2]> {
    let t = s.trim();
    let err = || anyhow!("invalid shift {s:?}");
    let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) else {
        return Ok([t.parse::<f64>().map_err(|_| err())?, 0.0]);
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len()).rev().find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        v => v.parse::<f64>().map_err(|_| err())?,
    };
    Ok([re.parse::<f64>().map_err(|_| err())?, im])
}

pub fn parse_shift_list(s: &str) -> Result<Vec<[f64; 2]>> {
    s.split(',').filter(|p| !p.trim().is_empty()).map(parse_shift).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_syntax() {
        assert_eq!(parse_shift("0.5").unwrap(), [0.5, 0.0]);
        assert_eq!(parse_shift("1e-3").unwrap(), [1e-3, 0.0]);
        assert_eq!(parse_shift("2i").unwrap(), [0.0, 2.0]);
        assert_eq!(parse_shift("-i").unwrap(), [0.0, -1.0]);
        assert_eq!(parse_shift("i").unwrap(), [0.0, 1.0]);
        assert_eq!(parse_shift("1-2i").unwrap(), [1.0, -2.0]);
        assert_eq!(parse_shift("0.5+1e-3i").unwrap(), [0.5, 1e-3]);
        assert_eq!(parse_shift("1e+2-3e-1i").unwrap(), [100.0, -0.3]);
        assert_eq!(parse_shift(" -2.5e-2+i ").unwrap(), [-0.025, 1.0]);
        assert!(parse_shift("abc").is_err());
        assert!(parse_shift("1+xi").is_err());
        assert_eq!(parse_shift_list("0.01,0.02, 1+1i").unwrap(), vec![[0.01, 0.0], [0.02, 0.0], [1.0, 1.0]]);
    }

    #[test]
    fn validation() {
        let mut c = RunConfig::default();
        assert!(c.validate().is_ok());
        c.eps = 0.0;
        assert!(c.validate().is_err());
        let c = RunConfig { shifts: Vec::new(), ..Default::default() };
        assert!(c.validate().is_err());
    }

    #[test]
    fn k_is_ignored_for_plain_methods() {
        let c = RunConfig { method: Method::SeqGmres, k: 7, ..Default::default() };
        assert_eq!(c.solve_options().k, 0);
        let c = RunConfig { method: Method::Srgmres, k: 7, ..Default::default() };
        assert_eq!(c.solve_options().k, 7);
    }

    #[test]
    fn config_round_trips_through_json() {
        let c = RunConfig::default();
        let back: RunConfig = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
    }
}
