//! Recycled GMRES: Arnoldi on `(I − CCᴴ)A_p`, the augmented update, and
//! harmonic-Ritz maintenance of the recycle space.

use crate::error::{Error, Result};
use crate::gmres::{arnoldi_cycle, gmres_cycle, stagnated, ArnoldiData};
use crate::kernels::eig::eig;
use crate::kernels::qr::{qr_thin, right_solve_upper, solve_upper};
use crate::kernels::vector::norm2;
use crate::kernels::{DenseMatrix, Shift};
use crate::operator::ShiftedOperator;
use crate::scalar::{cone, czero, lit, Real, C};

/// Relative size of an `R` diagonal below which trailing recycle vectors are dropped.
const DROP_TOL: f64 = 1e-12;

/// `U`, `C = A_p U` with orthonormal columns, and `Z_U = M⁻¹U`.
#[derive(Clone, Debug)]
pub struct RecycleSpace<T: Real> {
    pub u: DenseMatrix<T>,
    pub c: DenseMatrix<T>,
    pub zu: DenseMatrix<T>,
}

impl<T: Real> RecycleSpace<T> {
    pub fn empty(n: usize) -> Self {
        RecycleSpace { u: DenseMatrix::with_rows(n), c: DenseMatrix::with_rows(n), zu: DenseMatrix::with_rows(n) }
    }

    pub fn dim(&self) -> usize {
        self.c.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.dim() == 0
    }

    /// Builds the space for `op` from raw directions: `Z_U = M⁻¹U`, `C = (A+σI)Z_U`,
    /// then orthonormalizes. Costs `k` preconditioner applications and `k` matvecs.
    pub fn from_directions(op: &ShiftedOperator<T>, u: &DenseMatrix<T>) -> Result<Self> {
        let n = op.dim();
        let mut zu = DenseMatrix::with_rows(n);
        let mut c = DenseMatrix::with_rows(n);
        for j in 0..u.ncols() {
            let (z, w) = op.apply(u.col(j))?;
            zu.push_col(&z);
            c.push_col(&w);
        }
        Self::normalized(c, u.clone(), zu)
    }

    /// `C = QR`; `C ← Q`, `U ← UR⁻¹`, `Z_U ← Z_U R⁻¹`, dropping trailing
    /// columns once a diagonal of `R` falls below `1e-12·max|R_ii|`.
    pub fn normalized(c: DenseMatrix<T>, u: DenseMatrix<T>, zu: DenseMatrix<T>) -> Result<Self> {
        let n = c.nrows();
        if c.ncols() == 0 {
            return Ok(Self::empty(n));
        }
        let mut qr = qr_thin(&c);
        let keep = leading_rank(&qr.r);
        let (mut u, mut zu) = (u, zu);
        if keep < c.ncols() {
            if keep == 0 {
                return Ok(Self::empty(n));
            }
            qr = qr_thin(&c.cols(0, keep));
            u = u.cols(0, keep);
            zu = zu.cols(0, keep);
        }
        Ok(RecycleSpace { u: right_solve_upper(&u, &qr.r), zu: right_solve_upper(&zu, &qr.r), c: qr.q })
    }

    /// Re-targets the space from base shift σ to σ + δ: `C + δZ_U` is again
    /// the image of `Z_U`, so only a QR is needed.
    pub fn rebase(&self, delta: Shift<T>) -> Result<Self> {
        if self.is_empty() || delta.value() == czero() {
            return Ok(self.clone());
        }
        let mut c = self.c.clone();
        c.add_scaled(delta.value(), &self.zu);
        Self::normalized(c, self.u.clone(), self.zu.clone())
    }
}

fn leading_rank<T: Real>(r: &DenseMatrix<T>) -> usize {
    let k = r.ncols();
    let mx = (0..k).map(|i| r[(i, i)].norm()).fold(T::zero(), T::max);
    let floor = lit::<T>(DROP_TOL) * mx;
    (0..k).find(|&i| !(r[(i, i)].norm() > floor)).unwrap_or(k)
}

/// `x0 = x + Z_U Cᴴr`, `r0 = r − CCᴴr`.
pub fn initial_projection<T: Real>(rs: &RecycleSpace<T>, x: &[C<T>], r: &[C<T>]) -> (Vec<C<T>>, Vec<C<T>>) {
    if rs.is_empty() {
        return (x.to_vec(), r.to_vec());
    }
    let y = rs.c.adjoint_matvec(r);
    let dx = rs.zu.matvec(&y);
    let dr = rs.c.matvec(&y);
    (x.iter().zip(&dx).map(|(a, b)| a + b).collect(), r.iter().zip(&dr).map(|(a, b)| a - b).collect())
}

/// Arnoldi data of a cycle on `(I − CCᴴ)A_p` plus `B = CᴴA_pV_m`.
#[derive(Clone, Debug)]
pub struct AugmentedArnoldiData<T: Real> {
    pub arnoldi: ArnoldiData<T>,
    pub b: DenseMatrix<T>,
}

impl<T: Real> AugmentedArnoldiData<T> {
    pub fn k(&self) -> usize {
        self.b.nrows()
    }

    /// `Ḡ = [[I_k, B], [0, H̄]]`.
    pub fn g(&self) -> DenseMatrix<T> {
        let k = self.k();
        let h = &self.arnoldi.h;
        let mut g = DenseMatrix::zeros(k + h.nrows(), k + h.ncols());
        for i in 0..k {
            g[(i, i)] = cone();
        }
        g.set_block(0, k, &self.b);
        g.set_block(k, k, h);
        g
    }
}

#[derive(Clone, Debug)]
pub struct AugCycleResult<T: Real> {
    pub x: Vec<C<T>>,
    pub r: Vec<C<T>>,
    pub data: AugmentedArnoldiData<T>,
    /// Krylov coefficients `y`; the recycle coefficients are `−By`.
    pub y: Vec<C<T>>,
    pub history: Vec<T>,
    pub resnorm: T,
    pub matvecs: usize,
}

/// One recycled cycle from `(x0, r0)` with `Cᴴr0 = 0`.
pub fn rgmres_cycle<T: Real>(
    op: &ShiftedOperator<T>,
    x0: &[C<T>],
    r0: &[C<T>],
    rs: &RecycleSpace<T>,
    m: usize,
    tol_abs: T,
) -> Result<AugCycleResult<T>> {
    let before = op.matvecs();
    let (arnoldi, b, y, history, resnorm) = arnoldi_cycle(op, &rs.c, r0, m, tol_abs)?;
    let mut x = x0.to_vec();
    let mut r = r0.to_vec();
    if arnoldi.steps > 0 {
        let by = b.matvec(&y);
        let mut dx = arnoldi.z.matvec(&y);
        let du = rs.zu.matvec(&by);
        for i in 0..dx.len() {
            dx[i] -= du[i];
        }
        let dr = arnoldi.v.matvec(&arnoldi.h.matvec(&y));
        for i in 0..x.len() {
            x[i] += dx[i];
            r[i] -= dr[i];
        }
    }
    let data = AugmentedArnoldiData { arnoldi, b };
    Ok(AugCycleResult { x, r, data, y, history, resnorm, matvecs: op.matvecs() - before })
}

#[derive(Clone, Debug)]
pub struct HarmonicRitz<T: Real> {
    pub space: RecycleSpace<T>,
    /// Selected harmonic Ritz values `θ`, smallest modulus first.
    pub values: Vec<C<T>>,
}

/// `W = [C V_{m+1}]ᴴ[U V_m]` from its blocks; `CᴴV_m = 0` by construction.
fn w_matrix<T: Real>(data: &AugmentedArnoldiData<T>, rs: &RecycleSpace<T>) -> DenseMatrix<T> {
    let k = rs.dim();
    let v = &data.arnoldi.v;
    let j = data.arnoldi.steps;
    let rows = k + data.arnoldi.h.nrows();
    let mut w = DenseMatrix::zeros(rows, k + j);
    if k > 0 {
        w.set_block(0, 0, &rs.c.adjoint_matmul(&rs.u));
        w.set_block(k, 0, &v.adjoint_matmul(&rs.u));
    }
    for i in 0..j {
        w[(k + i, k + i)] = cone();
    }
    w
}

/// New recycle space from the `k` harmonic Ritz vectors of smallest `|θ|`
/// over `range([U V_m])`, solving `ḠᴴḠ g = θ ḠᴴW g` as the ordinary
/// eigenproblem `Ḡ⁺W g = θ⁻¹ g`.
pub fn harmonic_ritz_update<T: Real>(data: &AugmentedArnoldiData<T>, rs: &RecycleSpace<T>, k: usize) -> Result<HarmonicRitz<T>> {
    let n = rs.c.nrows().max(data.arnoldi.v.nrows());
    let k_old = rs.dim();
    let j = data.arnoldi.steps;
    let k = k.min(k_old + j);
    if k == 0 {
        return Ok(HarmonicRitz { space: RecycleSpace::empty(n), values: Vec::new() });
    }
    let g = data.g();
    let w = w_matrix(data, rs);
    let gq = qr_thin(&g);
    let qtw = gq.q.adjoint_matmul(&w);
    let dim = k_old + j;
    let mut kmat = DenseMatrix::zeros(dim, dim);
    for c in 0..dim {
        let col = solve_upper(&gq.r, qtw.col(c));
        if !crate::kernels::vector::is_finite(&col) {
            return Err(Error::Singular { condition: f64::INFINITY });
        }
        kmat.col_mut(c).copy_from_slice(&col);
    }
    let e = eig(&kmat)?;
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| e.values[b].norm().partial_cmp(&e.values[a].norm()).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b)));
    let pick = &order[..k];
    let values: Vec<C<T>> = pick.iter().map(|&i| cone::<T>() / e.values[i]).collect();
    let mut p = DenseMatrix::zeros(dim, k);
    for (c, &i) in pick.iter().enumerate() {
        p.col_mut(c).copy_from_slice(e.vectors.col(i));
    }
    let mut gp = qr_thin(&g.matmul(&p));
    let keep = leading_rank(&gp.r);
    if keep < k {
        if keep == 0 {
            return Ok(HarmonicRitz { space: RecycleSpace::empty(n), values: Vec::new() });
        }
        p = p.cols(0, keep);
        gp = qr_thin(&g.matmul(&p));
    }
    let v = &data.arnoldi.v;
    let cv = rs.c.hcat(v);
    let uv = rs.u.hcat(&v.cols(0, j));
    let zz = rs.zu.hcat(&data.arnoldi.z);
    let pr = right_solve_upper(&p, &gp.r);
    let space = RecycleSpace { c: cv.matmul(&gp.q), u: uv.matmul(&pr), zu: zz.matmul(&pr) };
    Ok(HarmonicRitz { space, values: values[..p.ncols()].to_vec() })
}

#[derive(Clone, Debug)]
pub struct RecycledResult<T: Real> {
    pub x: Vec<C<T>>,
    pub r: Vec<C<T>>,
    pub converged: bool,
    pub cycles: usize,
    pub matvecs: usize,
    pub history: Vec<T>,
    pub recycle: RecycleSpace<T>,
    pub eig_failures: usize,
}

/// Single-system recycled GMRES. With an empty incoming space the first cycle
/// is plain GMRES and its harmonic Ritz vectors seed the recycle space.
/// `rs_in` must satisfy `C = A_p U` for `op`.
#[allow(clippy::too_many_arguments)]
pub fn rgmres_solve<T: Real>(
    op: &ShiftedOperator<T>,
    x_init: &[C<T>],
    r_init: &[C<T>],
    rs_in: RecycleSpace<T>,
    m: usize,
    k: usize,
    eps: T,
    max_cycles: usize,
) -> Result<RecycledResult<T>> {
    let before = op.matvecs();
    let r0norm = norm2(r_init);
    let tol = eps * r0norm;
    let mut rs = rs_in;
    let (mut x, mut r) = initial_projection(&rs, x_init, r_init);
    let mut res = norm2(&r);
    let mut out = RecycledResult {
        x: Vec::new(),
        r: Vec::new(),
        converged: res <= tol,
        cycles: 0,
        matvecs: 0,
        history: Vec::new(),
        recycle: RecycleSpace::empty(x.len()),
        eig_failures: 0,
    };
    while !out.converged && out.cycles < max_cycles {
        let (nx, nr, data) = recycled_step(op, &x, &r, &rs, m, tol)?;
        x = nx;
        r = nr;
        out.cycles += 1;
        let new = norm2(&r);
        out.history.push(if r0norm > T::zero() { new / r0norm } else { T::zero() });
        out.converged = new <= tol;
        if k > 0 && data.arnoldi.steps > 0 {
            match harmonic_ritz_update(&data, &rs, k) {
                Ok(h) => rs = h.space,
                Err(Error::EigenNoConvergence { .. }) | Err(Error::Singular { .. }) => out.eig_failures += 1,
                Err(e) => return Err(e),
            }
        }
        if !out.converged && stagnated(res, new) {
            break;
        }
        res = new;
    }
    out.x = x;
    out.r = r;
    out.recycle = rs;
    out.matvecs = op.matvecs() - before;
    Ok(out)
}

/// Plain GMRES cycle when the space is empty, recycled cycle otherwise.
pub(crate) fn recycled_step<T: Real>(
    op: &ShiftedOperator<T>,
    x: &[C<T>],
    r: &[C<T>],
    rs: &RecycleSpace<T>,
    m: usize,
    tol: T,
) -> Result<(Vec<C<T>>, Vec<C<T>>, AugmentedArnoldiData<T>)> {
    if rs.is_empty() {
        let cyc = gmres_cycle(op, x, r, m, tol)?;
        let j = cyc.data.steps;
        Ok((cyc.x, cyc.r, AugmentedArnoldiData { arnoldi: cyc.data, b: DenseMatrix::zeros(0, j) }))
    } else {
        let cyc = rgmres_cycle(op, x, r, rs, m, tol)?;
        Ok((cyc.x, cyc.r, cyc.data))
    }
}
