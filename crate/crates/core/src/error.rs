use thiserror::Error;

/// Errors raised by the extension library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("exponent p = {0} is outside the admissible range")]
    InvalidExponent(f64),

    #[error("points and values have different lengths ({points} vs {values})")]
    LengthMismatch { points: usize, values: usize },

    #[error("empty point set")]
    Empty,

    #[error("non-finite input at index {0}")]
    NonFinite(usize),

    #[error("duplicate abscissa {0}")]
    DuplicatePoint(f64),

    #[error("abscissae not strictly increasing at index {0}")]
    NotIncreasing(usize),

    #[error("gap {gap:e} below the minimal admissible gap {min:e}")]
    GapTooSmall { gap: f64, min: f64 },

    #[error("need at least {needed} points, got {got}")]
    InsufficientPoints { needed: usize, got: usize },

    #[error("point {0} is not a member of the set")]
    PointNotInSet(f64),

    #[error("subset already exhausts the set")]
    SetExhausted,

    #[error("seminorm is infinite: an unbounded piece has degree {degree} >= m = {m}")]
    InfiniteSeminorm { degree: usize, m: usize },

    #[error("mode {mode} does not support n = {n}, m = {m}")]
    ModeSizeMismatch { mode: &'static str, n: usize, m: usize },

    #[error("intervals overlap or touch near {0}")]
    OverlappingIntervals(f64),

    #[error("degenerate interval [{0}, {1}]")]
    DegenerateInterval(f64, f64),

    #[error("invalid breakpoints or piece count: {0}")]
    InvalidPiecewise(String),

    #[error("m must be positive")]
    InvalidOrder,

    #[error("linear system is ill-conditioned (estimate {0:e})")]
    IllConditioned(f64),

    #[error("enumeration of {0} subsets exceeds the configured limit")]
    TooLarge(u128),
}

pub type Result<T> = std::result::Result<T, Error>;
