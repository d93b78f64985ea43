//! Problem ingestion and generation.

pub mod fixtures;
pub mod generators;
pub mod matrix_market;

pub use fixtures::FixtureMetadata;
pub use generators::{qcd_base_matrix, rhs_sequence, synthetic_convdiff};
pub use matrix_market::{format_matrix_market, parse_matrix_market, read_matrix_market, write_matrix_market};

use crate::error::{Error, Result};
use crate::kernels::{Shift, SparseOperator};
use crate::scalar::{Real, C};

/// One shifted family `(A + σ_ℓ I)x = b`.
#[derive(Clone, Debug)]
pub struct ProblemInstance<T: Real> {
    pub op: SparseOperator<T>,
    pub b: Vec<C<T>>,
    pub shifts: Vec<Shift<T>>,
    pub label: String,
}

impl<T: Real> ProblemInstance<T> {
    pub fn new(op: SparseOperator<T>, b: Vec<C<T>>, shifts: Vec<Shift<T>>, label: impl Into<String>) -> Result<Self> {
        if !op.is_square() || b.len() != op.nrows() {
            return Err(Error::DimensionMismatch { context: "problem right-hand side", expected: op.nrows(), got: b.len() });
        }
        if b.iter().all(|z| z.norm() == T::zero()) {
            return Err(Error::InvalidArgument("right-hand side is zero".into()));
        }
        Ok(ProblemInstance { op, b, shifts, label: label.into() })
    }
}
