use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("ℓ = {0} is not a (half)integer")]
    NotHalfInteger(String),
    #[error("ℓ = {0} must be positive")]
    NonPositive(String),
    #[error("2ℓ = {doubled} exceeds the supported maximum {max}")]
    EllTooLarge { doubled: u64, max: u32 },
    #[error("ℓ = {0} is not admissible: the density argument changes sign")]
    InadmissibleEll(String),
    #[error("dynamical exponent out of range: z = {0} must exceed 1/2")]
    DynamicalExponentOutOfRange(String),
    #[error("acceleration index n = {n} outside 0..={max}")]
    OutOfRangeAccelerationIndex { n: u32, max: u32 },
    #[error("generator {0} does not exist for this algebra")]
    UnknownGenerator(String),
    #[error("parameter mismatch: {0}")]
    ParameterMismatch(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("spatial dimension {got} not supported (expected {expected})")]
    DimensionMismatch { expected: String, got: usize },
    #[error("point (t = {t}) lies outside the solution domain")]
    OutsideDomain { t: f64 },
    #[error("density is not positive at t = {t}")]
    NonPositiveDensity { t: f64 },
    #[error("stencil leaves the valid region near t = {t}")]
    DomainExceeded { t: f64 },
    #[error("nesting depth {depth} exceeds maximum {max}")]
    DepthExceeded { depth: usize, max: usize },
    #[error("no point of the requested region has positive density")]
    EmptyPositivityDomain,
    #[error("u ≡ y/2 on this branch, the density is undefined")]
    BranchCollision,
    #[error("no bounded solution: {0}")]
    NoBoundedSolution(String),
    #[error("no root of the transcendental equation in [{lo}, {hi}]")]
    NoRootInBracket { lo: f64, hi: f64 },
    #[error("the transformation has a pole at t = {0} inside the domain")]
    PoleInDomain(f64),
    #[error("SL(2,R) determinant is {0}, expected 1")]
    NotUnimodular(f64),
    #[error("wrong symmetry: {0}")]
    SymmetryMismatch(String),
}
