use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("value at {cell} is not Hermitian (deviation {deviation:e})")]
    NotHermitian { cell: String, deviation: f64 },

    #[error("value at {cell} is not positive semidefinite (minimum eigenvalue {min_eigenvalue:e})")]
    NotPositive { cell: String, min_eigenvalue: f64 },

    #[error("weight at {cell} is negative ({weight})")]
    NegativeWeight { cell: String, weight: f64 },

    #[error("duplicate atom location {0}")]
    DuplicateAtom(f64),

    #[error("non-finite number in {0}")]
    NonFinite(String),

    #[error("grid must be strictly increasing with at least two points")]
    InvalidGrid,

    #[error("grid has {cells} cells but {densities} densities were given")]
    GridDensityMismatch { cells: usize, densities: usize },

    #[error("operator is singular (reciprocal condition {rcond:e})")]
    Singular { rcond: f64 },

    #[error("vectors are not orthonormal (deviation {deviation:e})")]
    NotOrthonormal { deviation: f64 },

    #[error("operator is not an isometry (deviation {deviation:e})")]
    NotIsometry { deviation: f64 },

    #[error("measure is nonzero on {cell} where the reference measure vanishes")]
    DominationViolation { cell: String },

    #[error("measure is zero")]
    ZeroMeasure,

    #[error("measure has an absolutely continuous part; an atomic measure is required")]
    NotAtomic,

    #[error("atoms do not sum to the identity (deviation {deviation:e})")]
    NotPovm { deviation: f64 },

    #[error("not a resolution of the identity: {0}")]
    NotOrthogonal(String),

    #[error("function is not defined on the cells of the measure: {cell}")]
    CellMismatch { cell: String },

    #[error("vector is not of maximal type")]
    NotMaximalType,

    #[error("vector does not lie in the subspace (distance {distance:e})")]
    NotInSubspace { distance: f64 },

    #[error("{what}: search exhausted after {tries} tries")]
    SearchExhausted { what: String, tries: usize },

    #[error("{what} = {value} is out of range (allowed {min}..={max})")]
    OutOfRange {
        what: &'static str,
        value: usize,
        min: usize,
        max: usize,
    },

    #[error("weights must be positive and finite")]
    InvalidWeights,

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors raised by randomized searches that ran out of tries.
    pub fn is_exhausted(&self) -> bool {
        matches!(self, Error::SearchExhausted { .. })
    }
}
