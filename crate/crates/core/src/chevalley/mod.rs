//! Cartan data, root systems and Chevalley bases of the simple Lie algebras.

mod algebra;
mod cartan;
mod construct;
mod roots;

pub use algebra::{build_algebra, BasisKind, ChevalleyAlgebra, StructureTable};
pub use cartan::{validate_cartan_matrix, CartanDatum, Series, TypeLabel, MAX_RANK};
pub use roots::{roots_from_cartan, Root};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChevalleyError {
    #[error("cannot parse type label {0:?}")]
    BadLabel(String),
    #[error("unsupported type {0}")]
    UnsupportedType(String),
    #[error("not a finite-type Cartan matrix: {0}")]
    NotFiniteType(String),
    #[error("not a root: {0:?}")]
    BadRoot(Vec<i64>),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("structure constant audit failed: {0}")]
    Audit(String),
    #[error("vector length mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
}
