//! Finite simplicial models, normalized cochains and their operations.

pub mod builders;
mod cochain;
mod map;
mod model;
pub mod operator;
mod product;
mod quotient;

pub use cochain::Cochain;
pub use map::{FreeInvolution, SimplicialMap};
pub use model::{degenerate_target, SimplicialModel, Violation, DEGREE_CAP};
pub use operator::{Degeneracy, Target};
pub use product::{product, Product, ProductCell};
pub use quotient::{orbit_quotient, quotient_free_involution, OrbitQuotient};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SimplicialError {
    #[error("malformed model: {0}")]
    BadStructure(String),
    #[error("degree {degree} is outside the available range (max {max})")]
    DegreeOutOfRange { degree: usize, max: usize },
    #[error("degrees {left} and {right} do not match")]
    DegreeMismatch { left: usize, right: usize },
    #[error("cochains or maps live on different models")]
    ModelMismatch,
    #[error("cochain of degree {degree} is not closed")]
    NotClosed { degree: usize },
    #[error("not simplicial: {0}")]
    NotSimplicial(String),
    #[error("involution fixes cell {cell} in degree {degree}")]
    FixedCell { degree: usize, cell: usize },
    #[error("the double cover is trivial: its characteristic class vanishes")]
    TrivialCover,
    #[error("invalid group table: {0}")]
    InvalidGroup(String),
}
