//! Dense and sparse computational primitives.

pub mod dense;
pub mod eig;
pub mod hermitian;
pub mod lsq;
pub mod mgs;
pub mod qr;
pub mod sparse;
pub mod vector;

pub use dense::DenseMatrix;
pub use hermitian::hermitian_solve;
pub use lsq::{hessenberg_lsq, LsqSolution};
pub use mgs::{mgs_orthogonalize, mgs_orthogonalize_blocks};
pub use sparse::{Shift, SparseOperator};
