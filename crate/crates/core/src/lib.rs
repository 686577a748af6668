//! Exact-arithmetic invariants of hyperplane arrangements.
//!
//! The crate computes intersection lattices, building and nested sets,
//! modular-element structure, local charts of wonderful compactifications
//! with their boundary decompositions and retractions, reduced bar complexes
//! and holonomy algebras, and evaluates iterated-integral associators for
//! one-dimensional arrangements numerically.

pub mod arrangement;
pub mod bar;
pub mod error;
pub mod field;
pub mod holonomy;
pub mod lattice;
pub mod matrix;
pub mod modularity;
pub mod nested;
pub mod charts;
pub mod numeric;
pub mod poly;

pub use arrangement::{builtin, Arrangement, Flat};
pub use error::Error;
pub use field::{FieldDesc, FieldElement};
pub use lattice::{BuildingSet, IntersectionLattice};
pub use nested::{AdaptedBasis, NestedSet};
