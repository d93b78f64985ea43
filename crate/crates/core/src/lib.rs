//! Right-preconditioned shifted GMRES and shifted recycled GMRES for families
//! `(A + σ_ℓ I)x = b` of sparse complex systems.
//!
//! One base system per family runs (recycled) GMRES cycles; every other shift
//! receives a minimum-residual projection onto the same search space at no
//! extra operator or preconditioner cost. Everything is generic over the real
//! scalar (`f32` or `f64`) through [`scalar::Real`].
//!
//! ```
//! use shiftkrylov::{problems, solve_family, Method, PrecondKind, Preconditioner64, RecycleSpace64, Shift, ShiftedFamily64, SolveOptions};
//!
//! let a = problems::synthetic_convdiff(20, 0.5, 0.1)?;
//! let b = problems::rhs_sequence::<f64>(a.nrows(), 1, 1, true).remove(0);
//! let shifts: Vec<_> = [0.01, 0.05, 0.5, 1.0].map(Shift::real).to_vec();
//! let p = Preconditioner64::for_family(PrecondKind::Ilu0, &a, &shifts)?;
//! let mut fam = ShiftedFamily64::new(a, b, shifts)?;
//! let opts = SolveOptions { m: 30, k: 10, eps: 1e-8, ..Default::default() };
//! let (report, _recycle) = solve_family(Method::Srgmres, &mut fam, &p, &opts, RecycleSpace64::empty(400))?;
//! assert!(report.converged);
//! # Ok::<(), shiftkrylov::Error>(())
//! ```

pub mod error;
pub mod kernels;
pub mod scalar;
pub mod precond;
pub mod operator;
pub mod gmres;
pub mod problems;
pub mod shifted_core;
pub mod family;
pub mod report;
pub mod shifted_gmres;
pub mod rgmres;
pub mod shifted_rgmres;
pub mod cost_model;
pub mod drivers;

pub use drivers::{solve_family, solve_sequence, Method, SequenceMember};
pub use error::{Error, Result};
pub use family::{ShiftConvention, ShiftedFamily, SolveOptions};
pub use kernels::{DenseMatrix, Shift, SparseOperator};
pub use precond::{PrecondKind, Preconditioner};
pub use report::{SolveReport, SystemReport};
pub use rgmres::RecycleSpace;

pub type Complex64 = scalar::C<f64>;
pub type Complex32 = scalar::C<f32>;
pub type SparseOperator64 = SparseOperator<f64>;
pub type SparseOperator32 = SparseOperator<f32>;
pub type DenseMatrix64 = DenseMatrix<f64>;
pub type DenseMatrix32 = DenseMatrix<f32>;
pub type ShiftedFamily64 = ShiftedFamily<f64>;
pub type ShiftedFamily32 = ShiftedFamily<f32>;
pub type Preconditioner64 = Preconditioner<f64>;
pub type Preconditioner32 = Preconditioner<f32>;
pub type RecycleSpace64 = RecycleSpace<f64>;
pub type RecycleSpace32 = RecycleSpace<f32>;
