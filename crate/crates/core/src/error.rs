use thiserror::Error;

use crate::series::Modulus;

/// Errors raised by the arithmetic, cocycle, extension and section layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedInput(String),

    #[error("ring mismatch: {left} vs {right}")]
    RingMismatch { left: Modulus, right: Modulus },

    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("parameter window too small: indices {lo}..={hi} are needed")]
    WindowTooSmall { lo: i64, hi: i64 },

    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),

    #[error("extension elements belong to different cocycles")]
    SpecMismatch,

    #[error("bad parameters: {0}")]
    BadParams(String),

    #[error("series is not exact (finitely supported): {0}")]
    NotExact(String),

    #[error("order mismatch: element has order p^{expected}, argument ring is Z/p^{found}")]
    OrderMismatch { expected: u32, found: u32 },

    #[error("polynomial has degree zero")]
    DegreeZero,

    #[error("block {poly} at place {place} is not contractive ({test} test)")]
    NotContractive {
        place: String,
        poly: String,
        test: &'static str,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
