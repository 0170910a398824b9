use thiserror::Error;

/// Errors produced by code construction, transformation and analysis.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid code parameters: {0}")]
    InvalidSpec(String),

    #[error("{element} has multiplicative order {found} modulo {modulus}, expected {expected}")]
    OrderMismatch {
        element: u64,
        modulus: u64,
        expected: u64,
        found: u64,
    },

    #[error("{value} is not invertible modulo {modulus}")]
    NotInvertible { value: u64, modulus: u64 },

    #[error("index list is not a permutation of 0..{len}")]
    NotPermutation { len: usize },

    #[error("index {index} out of range 0..{bound}")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not quasi-cyclic with period {q}: {detail}")]
    NotQuasiCyclic { q: usize, detail: String },

    #[error("termination over {periods} periods is too short (need at least {min})")]
    TerminationTooShort { periods: usize, min: usize },

    #[error("code dimension {k} exceeds the enumeration limit {limit}")]
    DimensionTooLarge { k: usize, limit: usize },

    #[error("weight spectrum is empty")]
    EmptySpectrum,

    #[error("alist parse error on line {line}: {msg}")]
    Alist { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
