use thiserror::Error;

/// Errors produced by the solvers and constructions in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid norm specification: {0}")]
    InvalidSpace(String),

    #[error("constraint matrix is rank deficient (relative singular value {0:e})")]
    RankDeficient(f64),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("functional is identically zero")]
    ZeroFunctional,

    #[error("aggregator oracle returned {0}, expected a finite nonnegative value")]
    OracleValue(f64),

    #[error("affine constraint system has no solution")]
    InfeasibleConstraints,

    #[error("linear program failed: {0}")]
    LinearProgram(String),

    #[error("domain is empty")]
    EmptyDomain,

    #[error("sets are not disjoint or the reference set is empty ({0})")]
    NotDisjoint(String),

    #[error("separation margin {margin:e} is below the required {required:e}")]
    SeparationTooThin { margin: f64, required: f64 },

    #[error("common radius {r} must exceed every input radius (largest is {max_radius})")]
    PreconditionRadius { r: f64, max_radius: f64 },

    #[error("ball system has a nonempty intersection")]
    NotEmpty,

    #[error("loop invariant violated after step {step}: mixed ball system intersects")]
    LoopInvariantViolated { step: usize },

    #[error("final ball system could not be certified empty (depth {depth:e})")]
    Unverified { depth: f64 },

    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("truncation dimension {0} is invalid")]
    InvalidTruncation(usize),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("instance schema violation: {0}")]
    Schema(String),

    #[error("seed point {index} violates the truncated constraints by {violation:e}")]
    SeedInfeasible { index: usize, violation: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
