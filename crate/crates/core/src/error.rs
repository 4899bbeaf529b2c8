use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("coefficient rings differ: {left} vs {right}")]
    RingMismatch { left: String, right: String },

    #[error("constant term is not invertible")]
    NonInvertible,

    #[error("exponent {exp2}/2 is at or beyond the truncation order {order}/2")]
    BeyondTruncation { exp2: u32, order: u32 },

    #[error("series is not even in the root variable (odd coefficient at x^{degree})")]
    NotEven { degree: usize },

    #[error("root series truncated at x^{have}, need coefficients through x^{need}")]
    InsufficientTruncation { have: usize, need: usize },

    #[error("root series has zero constant term")]
    ZeroConstantTerm,

    #[error("form degree {degree} exceeds the truncation degree {max}")]
    DegreeExceedsTruncation { degree: u32, max: u32 },

    #[error("form degree {0} must be even")]
    OddDegree(u32),

    #[error("expected {expected} root values, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid root profile: {0}")]
    InvalidProfile(String),

    #[error("fiber dimension {fiber_dim} is not admissible for m = {m}: {reason}")]
    FiberDimMismatch { fiber_dim: u32, m: u32, reason: String },

    #[error("triangular system has a non-unit diagonal entry at r = {0}")]
    SingularSystem(usize),

    #[error("series is not in the span of the modular basis (first residual at q^{exp2}/2)")]
    NotInSpan { exp2: u32 },

    #[error("virtual rank {0} is not an integer")]
    NonIntegralRank(String),

    #[error("unsupported fiber dimension {0}")]
    UnsupportedDimension(u32),

    #[error(
        "theta_1(0, tau) carries the fractional prefactor q^(1/8); only its fourth power is exposed as an exact series"
    )]
    FractionalExponent,

    #[error("invalid sample point: {0}")]
    InvalidPoint(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
