use std::io::Read;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use flate2::read::GzDecoder;
use serde::Serialize;
use shiftkrylov::problems::{parse_matrix_market, qcd_base_matrix, FixtureMetadata};
use shiftkrylov::SparseOperator64;

pub const DEFAULT_BASE_URL: &str = "https://sparse.tamu.edu/MM/QCD";

pub const SMALL_SET: [&str; 7] =
    ["conf5_0-4x4-10", "conf5_0-4x4-14", "conf5_0-4x4-18", "conf5_0-4x4-22", "conf5_0-4x4-26", "conf6_0-4x4-20", "conf6_0-4x4-30"];

pub const NORM1_RANGE: [f64; 2] = [28.0, 31.0];
pub const NORM2_RANGE: [f64; 2] = [11.0, 14.0];

const MAX_ARCHIVE_BYTES: u64 = 256 << 20;

#[derive(Clone, Debug)]
pub struct FetchOptions {
    pub dir: PathBuf,
    pub names: Vec<String>,
    pub base_url: String,
    pub kappa_override: Option<f64>,
}

impl FetchOptions {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        FetchOptions { dir: dir.into(), names: SMALL_SET.iter().map(|s| s.to_string()).collect(), base_url: DEFAULT_BASE_URL.into(), kappa_override: None }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FetchedMatrix {
    pub name: String,
    pub path: PathBuf,
    pub kappa_c: Option<f64>,
    pub norm1: Option<f64>,
    pub norm2: Option<f64>,
    pub norms_in_range: Option<bool>,
    pub warnings: Vec<String>,
}

/// Pulls the `.mtx` member named `{name}.mtx` out of a gzipped tarball.
pub fn extract_mtx(archive: &[u8], name: &str) -> Result<String> {
    let mut tar = tar::Archive::new(GzDecoder::new(archive));
    let want = format!("{name}.mtx");
    for entry in tar.entries()? {
        let mut entry = entry?;
        let path = entry.path()?.into_owned();
        if path.file_name().is_some_and(|f| f == want.as_str()) {
            let mut text = String::new();
            entry.read_to_string(&mut text)?;
            return Ok(text);
        }
    }
    bail!("{want} not found in archive")
}

/// Looks for `kc = …`, `kappa_c = …` or `kappa = …` in the comment header.
pub fn parse_kappa(mtx: &str) -> Option<f64> {
    for line in mtx.lines().take_while(|l| l.starts_with('%')) {
        let lower = line.to_ascii_lowercase();
        for key in ["kappa_c", "kappac", "kappa", "kc"] {
            let Some(pos) = lower.find(key) else { continue };
            let rest = lower[pos + key.len()..].trim_start_matches(|c: char| c.is_whitespace() || c == '=' || c == ':');
            let num: String = rest.chars().take_while(|c| c.is_ascii_digit() || matches!(c, '.' | 'e' | '-' | '+')).collect();
            if let Ok(v) = num.parse::<f64>() {
                if v > 0.0 {
                    return Some(v);
                }
            }
        }
    }
    None
}

/// Writes `{name}.mtx` and, when κ_c is known, the metadata sidecar.
pub fn install(dir: &Path, name: &str, mtx: &str, kappa_override: Option<f64>) -> Result<FetchedMatrix> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(format!("{name}.mtx"));
    std::fs::write(&path, mtx)?;
    let mut out = FetchedMatrix { name: name.into(), path: path.clone(), kappa_c: None, norm1: None, norm2: None, norms_in_range: None, warnings: Vec::new() };
    let Some(kc) = kappa_override.or_else(|| parse_kappa(mtx)) else {
        out.warnings.push(format!("{name}: critical kappa not found in the file header; no metadata written, pass --kappa-c to set it"));
        return Ok(out);
    };
    let meta = FixtureMetadata { name: name.into(), kappa_c: kc, norm1_range: NORM1_RANGE, norm2_range: NORM2_RANGE };
    meta.write(path.with_extension("json"))?;
    out.kappa_c = Some(kc);
    let d: SparseOperator64 = parse_matrix_market(mtx).with_context(|| format!("parsing {name}"))?;
    let a = qcd_base_matrix(&d, kc)?;
    let (n1, n2) = (a.norm1(), a.norm2_estimate(200));
    let ok = meta.norm1_ok(n1) && meta.norm2_ok(n2);
    if !ok {
        out.warnings.push(format!("{name}: base matrix norms ({n1:.3}, {n2:.3}) outside the expected ranges"));
    }
    out.norm1 = Some(n1);
    out.norm2 = Some(n2);
    out.norms_in_range = Some(ok);
    Ok(out)
}

fn download(url: &str) -> Result<Vec<u8>> {
    let mut resp = ureq::get(url).call().map_err(|e| anyhow!("GET {url}: {e}"))?;
    Ok(resp.body_mut().with_config().limit(MAX_ARCHIVE_BYTES).read_to_vec()?)
}

/// Downloads and installs each named matrix. Matrices already present are
/// not downloaded again.
pub fn fetch_qcd(opts: &FetchOptions) -> Result<Vec<FetchedMatrix>> {
    let mut out = Vec::new();
    for name in &opts.names {
        let existing = opts.dir.join(format!("{name}.mtx"));
        let mtx = if existing.is_file() {
            std::fs::read_to_string(&existing)?
        } else {
            let url = format!("{}/{name}.tar.gz", opts.base_url.trim_end_matches('/'));
            extract_mtx(&download(&url)?, name)?
        };
        out.push(install(&opts.dir, name, &mtx, opts.kappa_override)?);
    }
    Ok(out)
}
