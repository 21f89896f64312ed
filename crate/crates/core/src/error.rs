use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("bad reduction at p = {0}")]
    BadReduction(u64),
    #[error("non-invertible element: {0}")]
    NonInvertible(String),
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("line through the point at infinity twice is undefined")]
    UndefinedLine,
    #[error("vertical line has no affine cubic")]
    VerticalLine,
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("parameter lies on the branch locus: {0}")]
    RamifiedParam(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("polynomial is reducible over the base field")]
    NotIrreducible,
    #[error("extension is not Galois: found {found} of {expected} conjugates")]
    NotGalois { found: usize, expected: usize },
    #[error("extension is not cyclic of degree {0}")]
    NotCyclic(usize),
    #[error("fast-path calibration has not been run")]
    NotCalibrated,
    #[error("calibration inconsistent: {0}")]
    CalibrationInconsistent(String),
    #[error("constraints unsatisfiable: {0}")]
    Unsatisfiable(String),
    #[error("no admissible parameter found within bound {0}")]
    NotFound(u64),
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
