use alloc::string::String;

/// Everything that can go wrong in `kudo-core`.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("atom `{0}` appears more than once")]
    DuplicateAtom(String),
    #[error("atom {index} has non-positive mass {mass}")]
    NonPositiveMass { index: usize, mass: f64 },
    #[error("masses sum to {sum}, expected 1")]
    MassSumMismatch { sum: f64 },
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("space has no atoms")]
    EmptySpace,
    #[error("density value {value} at atom {index} is negative or not finite")]
    NegativeDensity { index: usize, value: f64 },
    #[error("density integrates to {integral}, expected 1")]
    DensityNotNormalized { integral: f64 },
    #[error("threshold t = {0} is negative")]
    NegativeThreshold(f64),
    #[error("objects live on different spaces")]
    SpaceMismatch,
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("exhaustive event sweep needs at most {max} atoms, space has {atoms}")]
    TooLargeForExhaustive { atoms: usize, max: usize },
    #[error("unknown entropy generator `{0}`")]
    UnknownPhi(String),
    #[error("power generator needs an exponent p > 1, got {0}")]
    BadExponent(f64),
    #[error("delta = {delta} must lie in (0, t_o) with t_o = {t_o}")]
    DeltaOutOfRange { delta: f64, t_o: f64 },
    #[error("candidate is not an upper Kudo-limit of the tail")]
    NotUpperLimit,
    #[error("density is not bounded away from zero")]
    UnboundedDensity,
    #[error("sequence period is empty")]
    EmptyPeriod,
    #[error("bad step law: {0}")]
    BadStepLaw(String),
    #[error("needs cylinder depth {needed}, only {available} available")]
    DepthExceeded { needed: usize, available: usize },
    #[error("need at least {min} samples, got {got}")]
    InsufficientSamples { got: u64, min: u64 },
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("cylinder depth must be at least 1")]
    ZeroDepth,
    #[error("{0} cylinders exceed the supported maximum")]
    TooManyCylinders(usize),
    #[error("hitting-probability iteration did not converge after {0} iterations")]
    NoConvergence(usize),
}

pub type Result<T> = core::result::Result<T, Error>;
