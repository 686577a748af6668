//! Error type shared across the crate.
//!
//! `Internal` variants signal a violated mathematical identity (always a bug),
//! as opposed to validation errors on user input. The CLI maps the former to
//! exit code 1 and the latter to exit code 2.

use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("zero covector at index {0}")]
    ZeroCovector(usize),
    #[error("duplicate hyperplane: covectors {0} and {1} are proportional")]
    DuplicateHyperplane(usize, usize),
    #[error("unknown builtin arrangement \"{0}\"")]
    UnknownBuiltin(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("flat is not in the intersection lattice")]
    FlatNotInLattice,
    #[error("the given set is not a building set")]
    NotABuildingSet,
    #[error("flat is not in the building set")]
    FlatNotInBuildingSet,
    #[error("building-set closure failed validation (implementation bug)")]
    ClosureFailed,
    #[error("assignment is not an adapted basis")]
    NotAdapted,
    #[error("no modular complement exists (precondition violated)")]
    NoComplement,
    #[error("the given flat is not a complement")]
    NotAComplement,
    #[error("arrangement does not have enough G-modular elements")]
    NotEnoughGModular,
    #[error("no M-adapted basis among the adapted bases")]
    NoMAdaptedBasis,
    #[error("pole order in the chosen coordinate exceeds {0}")]
    PoleOrderExceeded(usize),
    #[error("pole at {0} lies outside the arrangement")]
    PoleOutsideArrangement(String),
    #[error("path passes too close to the singularity at {0}")]
    PathTooCloseToSingularity(String),
    #[error("truncation weight {0} exceeds the supported maximum {1}")]
    TruncationTooLarge(usize, usize),
    #[error("divergent multiple zeta index: leading entry must be ≥ 2")]
    DivergentIndex,
    #[error("bad residue vector: entries must lie in 1..=q")]
    BadResidue,
    #[error("regularization fit is unstable: {0}")]
    FitUnstable(String),
    #[error("internal invariant violated ({0}); this is a bug")]
    Internal(String),
}

impl Error {
    /// True for violations of identities the library itself guarantees.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::Internal(_) | Error::ClosureFailed | Error::NoComplement | Error::NoMAdaptedBasis
        )
    }

    /// Machine-readable error code for the CLI JSON error object.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "DivisionByZero",
            Error::FieldMismatch(_) => "FieldMismatch",
            Error::ZeroCovector(_) => "ZeroCovector",
            Error::DuplicateHyperplane(_, _) => "DuplicateHyperplane",
            Error::UnknownBuiltin(_) => "UnknownBuiltin",
            Error::BadParams(_) => "BadParams",
            Error::FlatNotInLattice => "FlatNotInLattice",
            Error::NotABuildingSet => "NotABuildingSet",
            Error::FlatNotInBuildingSet => "FlatNotInBuildingSet",
            Error::ClosureFailed => "ClosureFailed",
            Error::NotAdapted => "NotAdapted",
            Error::NoComplement => "NoComplement",
            Error::NotAComplement => "NotAComplement",
            Error::NotEnoughGModular => "NotEnoughGModular",
            Error::NoMAdaptedBasis => "NoMAdaptedBasis",
            Error::PoleOrderExceeded(_) => "PoleOrderExceeded",
            Error::PoleOutsideArrangement(_) => "PoleOutsideArrangement",
            Error::PathTooCloseToSingularity(_) => "PathTooCloseToSingularity",
            Error::TruncationTooLarge(_, _) => "TruncationTooLarge",
            Error::DivergentIndex => "DivergentIndex",
            Error::BadResidue => "BadResidue",
            Error::FitUnstable(_) => "FitUnstable",
            Error::Internal(_) => "Internal",
        }
    }
}
