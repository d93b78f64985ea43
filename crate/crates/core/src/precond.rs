//! Right preconditioners applied as `M⁻¹v`: identity and zero-fill ILU.

use crate::error::{Error, Result};
use crate::kernels::{Shift, SparseOperator};
use crate::scalar::{cone, czero, Real, C};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrecondKind {
    Identity,
    Ilu0,
}

#[derive(Clone, Debug)]
pub struct Preconditioner<T: Real> {
    kind: PrecondKind,
    n: usize,
    /// Unit lower and upper triangular factors, present for `Ilu0`.
    factors: Option<(SparseOperator<T>, SparseOperator<T>)>,
}

impl<T: Real> Preconditioner<T> {
    pub fn identity(n: usize) -> Self {
        Preconditioner { kind: PrecondKind::Identity, n, factors: None }
    }

    pub fn kind(&self) -> PrecondKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn lower(&self) -> Option<&SparseOperator<T>> {
        self.factors.as_ref().map(|f| &f.0)
    }

    pub fn upper(&self) -> Option<&SparseOperator<T>> {
        self.factors.as_ref().map(|f| &f.1)
    }

    /// Builds the requested kind for the family's smallest shift.
    pub fn for_family(kind: PrecondKind, op: &SparseOperator<T>, shifts: &[Shift<T>]) -> Result<Self> {
        match kind {
            PrecondKind::Identity => Ok(Self::identity(op.nrows())),
            PrecondKind::Ilu0 => {
                let s = smallest_shift(shifts).map(|i| shifts[i]).unwrap_or_else(Shift::zero);
                ilu0_factor(&op.shifted(s))
            }
        }
    }

    /// `M⁻¹v`: the identity returns `v`, ILU(0) returns `U⁻¹(L⁻¹v)`.
    pub fn apply_inverse(&self, v: &[C<T>]) -> Result<Vec<C<T>>> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch { context: "preconditioner input", expected: self.n, got: v.len() });
        }
        let mut out = v.to_vec();
        if let Some((l, u)) = &self.factors {
            forward_unit(l, &mut out);
            backward(u, &mut out);
        }
        Ok(out)
    }
}

fn forward_unit<T: Real>(l: &SparseOperator<T>, x: &mut [C<T>]) {
    for i in 0..l.nrows() {
        let (cols, vals) = l.row(i);
        let mut s = x[i];
        for (&j, &v) in cols.iter().zip(vals) {
            if j < i {
                s -= v * x[j];
            }
        }
        x[i] = s;
    }
}

fn backward<T: Real>(u: &SparseOperator<T>, x: &mut [C<T>]) {
    for i in (0..u.nrows()).rev() {
        let (cols, vals) = u.row(i);
        let mut s = x[i];
        let mut d = cone();
        for (&j, &v) in cols.iter().zip(vals) {
            if j > i {
                s -= v * x[j];
            } else if j == i {
                d = v;
            }
        }
        x[i] = s / d;
    }
}

/// Index of the shift with minimum modulus, ties broken by smallest real part.
pub fn smallest_shift<T: Real>(shifts: &[Shift<T>]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, s) in shifts.iter().enumerate() {
        best = match best {
            None => Some(i),
            Some(b) => {
                let (mb, mi) = (shifts[b].value().norm(), s.value().norm());
                if mi < mb || (mi == mb && s.value().re < shifts[b].value().re) {
                    Some(i)
                } else {
                    Some(b)
                }
            }
        };
    }
    best
}

/// Zero-fill incomplete LU on the sparsity pattern of `op` (IKJ ordering).
pub fn ilu0_factor<T: Real>(op: &SparseOperator<T>) -> Result<Preconditioner<T>> {
    let n = op.nrows();
    if !op.is_square() {
        return Err(Error::DimensionMismatch { context: "ilu0 needs a square matrix", expected: n, got: op.ncols() });
    }
    if !op.has_full_diagonal() {
        let row = (0..n).find(|&i| !op.row(i).0.contains(&i)).unwrap_or(0);
        return Err(Error::ZeroPivot { row });
    }
    let row_ptr = op.row_ptr();
    let col_idx = op.col_idx();
    let mut vals = op.values().to_vec();
    let diag: Vec<usize> = (0..n).map(|i| row_ptr[i] + col_idx[row_ptr[i]..row_ptr[i + 1]].binary_search(&i).unwrap()).collect();
    // column → position in the current row, reset after each row
    let mut pos = vec![usize::MAX; n];
    for i in 0..n {
        let (start, end) = (row_ptr[i], row_ptr[i + 1]);
        for p in start..end {
            pos[col_idx[p]] = p;
        }
        for p in start..end {
            let k = col_idx[p];
            if k >= i {
                break;
            }
            let pivot = vals[diag[k]];
            if pivot == czero() || !(pivot.re.is_finite() && pivot.im.is_finite()) {
                return Err(Error::ZeroPivot { row: k });
            }
            let lik = vals[p] / pivot;
            vals[p] = lik;
            for q in diag[k] + 1..row_ptr[k + 1] {
                let j = col_idx[q];
                let target = pos[j];
                if target != usize::MAX {
                    let ukj = vals[q];
                    vals[target] -= lik * ukj;
                }
            }
        }
        let d = vals[diag[i]];
        if d == czero() || !(d.re.is_finite() && d.im.is_finite()) {
            return Err(Error::ZeroPivot { row: i });
        }
        for p in start..end {
            pos[col_idx[p]] = usize::MAX;
        }
    }
    let mut lt = Vec::new();
    let mut ut = Vec::new();
    for i in 0..n {
        for p in row_ptr[i]..row_ptr[i + 1] {
            let j = col_idx[p];
            if j < i {
                lt.push((i, j, vals[p]));
            } else {
                ut.push((i, j, vals[p]));
            }
        }
        lt.push((i, i, cone()));
    }
    let l = SparseOperator::from_triplets(n, n, &lt)?;
    let u = SparseOperator::from_triplets(n, n, &ut)?;
    Ok(Preconditioner { kind: PrecondKind::Ilu0, n, factors: Some((l, u)) })
}
