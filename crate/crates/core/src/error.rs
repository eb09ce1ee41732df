use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("unsupported instance: {0}")]
    Unsupported(String),

    #[error("modulus {0} is not a prime below 2^32")]
    NotPrime(u64),

    #[error("prime {p} must exceed the degree {d}")]
    PrimeTooSmall { p: u64, d: u32 },

    #[error("degenerate draw for {what} after {attempts} attempts (seed {seed})")]
    DegenerateDraw {
        what: &'static str,
        attempts: u32,
        seed: u64,
    },

    #[error("component {index} ({kind}) is in an unhandled position: {reason}")]
    Incidence {
        index: usize,
        kind: &'static str,
        reason: String,
    },

    #[error("invalid geometry: {0}")]
    Geometry(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
