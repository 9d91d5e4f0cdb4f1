use thiserror::Error;

/// Errors raised by node construction and evaluation routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum LejaError {
    #[error("expected a positive integer, got 0")]
    ZeroInput,

    #[error("angle {0} lies within tolerance of a multiple of pi")]
    AngleMultipleOfPi(f64),

    #[error("origin {0} is not on the unit circle")]
    NonUnitOrigin(String),

    #[error("requested {requested} points but only {available} boundary samples exist")]
    NotEnoughSamples { requested: usize, available: usize },

    #[error("seed index {index} out of range for {len} samples")]
    SeedOutOfRange { index: usize, len: usize },

    #[error("section of length {0} is a pure power of two")]
    PowerOfTwo(usize),

    #[error("node index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("nodes {0} and {1} coincide")]
    DuplicateNodes(usize, usize),

    #[error("structured evaluation needs k <= {block}, got {k}")]
    OutsideLeadingBlock { k: usize, block: usize },

    #[error("invalid ellipse axes a={a}, b={b}")]
    InvalidAxes { a: f64, b: f64 },

    #[error("node (eta_{p}, theta_{q}) is not in the array")]
    NodeNotInArray { p: usize, q: usize },

    #[error("need {needed} source points, got {got}")]
    InsufficientSources { needed: usize, got: usize },

    #[error("determinant oracle capped at N={cap}, got N={n}")]
    OracleCap { cap: usize, n: usize },

    #[error("ill-conditioned Vandermonde denominator (log10 |det| = {0:.1})")]
    IllConditioned(f64),

    #[error("empty boundary sample set")]
    EmptyBoundary,

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, LejaError>;
