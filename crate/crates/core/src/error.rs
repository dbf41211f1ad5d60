use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("duplicate points in input")]
    DuplicatePoints,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("points must be 2- or 3-dimensional, found {0}")]
    UnsupportedDimension(usize),
    #[error("curves are identical")]
    IdenticalCurves,
    #[error("curves belong to different families")]
    FamilyMismatch,
    #[error("defining objects are affinely dependent")]
    DependentInput,
    #[error("set is not coverable by a single object")]
    NotCoverable,
    #[error("instance size {size} exceeds the configured cap {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("search node limit {0} exceeded")]
    NodeLimit(u64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = core::result::Result<T, Error>;
