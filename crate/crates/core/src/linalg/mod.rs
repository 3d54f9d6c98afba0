//! Exact linear algebra over GF(2) and over ℤ.

mod f2;
mod integer;
mod sparse;
mod subspace;

pub use f2::{AffineSolution, Echelon, F2Matrix, F2Vector};
pub use integer::{SmithForm, ZMatrix};
pub use sparse::{reduce_mod2, SparseZMatrix, SparseZVector};
pub use subspace::Subspace;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("dimension mismatch in {op}: {left} vs {right}")]
    DimensionMismatch { op: &'static str, left: usize, right: usize },
}
