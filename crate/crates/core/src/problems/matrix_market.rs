//! Matrix Market coordinate files.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::kernels::SparseOperator;
use crate::scalar::{lit, to_f64, Real, C};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Field {
    Real,
    Integer,
    Complex,
    Pattern,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
    Hermitian,
    SkewSymmetric,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

pub fn read_matrix_market<T: Real>(path: impl AsRef<Path>) -> Result<SparseOperator<T>> {
    parse_matrix_market(&fs::read_to_string(path)?)
}

pub fn parse_matrix_market<T: Real>(text: &str) -> Result<SparseOperator<T>> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let tokens: Vec<String> = header.split_whitespace().map(|t| t.to_ascii_lowercase()).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(parse_err(hl, "expected '%%MatrixMarket matrix <format> <field> <symmetry>'"));
    }
    if tokens[2] != "coordinate" {
        return Err(parse_err(hl, format!("unsupported format '{}'", tokens[2])));
    }
    let field = match tokens[3].as_str() {
        "real" | "double" => Field::Real,
        "integer" => Field::Integer,
        "complex" => Field::Complex,
        "pattern" => Field::Pattern,
        f => return Err(parse_err(hl, format!("unsupported field '{f}'"))),
    };
    let symmetry = match tokens[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "hermitian" => Symmetry::Hermitian,
        "skew-symmetric" => Symmetry::SkewSymmetric,
        s => return Err(parse_err(hl, format!("unsupported symmetry '{s}'"))),
    };
    let mut size: Option<(usize, usize, usize)> = None;
    let mut trip: Vec<(usize, usize, C<T>)> = Vec::new();
    let mut read = 0usize;
    for (ln, raw) in lines {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let Some((nr, nc, nnz)) = size else {
            if parts.len() != 3 {
                return Err(parse_err(ln, "size line needs 'rows cols entries'"));
            }
            let p = |s: &str| s.parse::<usize>().map_err(|e| parse_err(ln, format!("bad size '{s}': {e}")));
            let s = (p(parts[0])?, p(parts[1])?, p(parts[2])?);
            trip.reserve(if symmetry == Symmetry::General { s.2 } else { 2 * s.2 });
            size = Some(s);
            continue;
        };
        if read == nnz {
            return Err(parse_err(ln, format!("more than the declared {nnz} entries")));
        }
        let want = match field {
            Field::Pattern => 2,
            Field::Real | Field::Integer => 3,
            Field::Complex => 4,
        };
        if parts.len() != want {
            return Err(parse_err(ln, format!("expected {want} fields, found {}", parts.len())));
        }
        let idx = |s: &str, bound: usize| -> Result<usize> {
            let v = s.parse::<usize>().map_err(|e| parse_err(ln, format!("bad index '{s}': {e}")))?;
            if v == 0 || v > bound {
                return Err(parse_err(ln, format!("index {v} outside 1..={bound}")));
            }
            Ok(v - 1)
        };
        let num = |s: &str| -> Result<f64> {
            let v = s.parse::<f64>().map_err(|e| parse_err(ln, format!("bad value '{s}': {e}")))?;
            if !v.is_finite() {
                return Err(parse_err(ln, "non-finite value"));
            }
            Ok(v)
        };
        let (i, j) = (idx(parts[0], nr)?, idx(parts[1], nc)?);
        let v: C<T> = match field {
            Field::Pattern => C::new(T::one(), T::zero()),
            Field::Real | Field::Integer => C::new(lit(num(parts[2])?), T::zero()),
            Field::Complex => C::new(lit(num(parts[2])?), lit(num(parts[3])?)),
        };
        trip.push((i, j, v));
        if i != j {
            match symmetry {
                Symmetry::General => {}
                Symmetry::Symmetric => trip.push((j, i, v)),
                Symmetry::Hermitian => trip.push((j, i, v.conj())),
                Symmetry::SkewSymmetric => trip.push((j, i, -v)),
            }
        }
        read += 1;
    }
    let (nr, nc, nnz) = size.ok_or_else(|| parse_err(text.lines().count().max(1), "missing size line"))?;
    if read != nnz {
        return Err(parse_err(text.lines().count().max(1), format!("declared {nnz} entries, found {read}")));
    }
    SparseOperator::from_triplets(nr, nc, &trip)
}

/// Writes a complex general coordinate file with round-trip precision.
pub fn write_matrix_market<T: Real>(op: &SparseOperator<T>, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_matrix_market(op))?;
    Ok(())
}

pub fn format_matrix_market<T: Real>(op: &SparseOperator<T>) -> String {
    let mut s = String::with_capacity(op.nnz() * 48 + 64);
    s.push_str("%%MatrixMarket matrix coordinate complex general\n");
    let _ = writeln!(s, "{} {} {}", op.nrows(), op.ncols(), op.nnz());
    for i in 0..op.nrows() {
        let (cols, vals) = op.row(i);
        for (&j, v) in cols.iter().zip(vals) {
            let _ = writeln!(s, "{} {} {:e} {:e}", i + 1, j + 1, to_f64(v.re), to_f64(v.im));
        }
    }
    s
}
