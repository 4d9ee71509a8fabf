use thiserror::Error;

use crate::poly::Var;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("no value assigned to variable `{0}`")]
    MissingVariable(Var),
    #[error("series constant term must be a nonzero rational constant")]
    NonInvertibleSeries,
    #[error("stirling arguments out of range: n = {n}, k = {k} (need 0 <= k <= n)")]
    StirlingRange { n: i64, k: i64 },
    #[error("order must be at least 1, got {0}")]
    InvalidOrder(u32),
    #[error("family `{family}` does not support order {order}")]
    UnsupportedOrder { family: String, order: u32 },
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("unknown or unsupported construction `{0}`")]
    UnknownConstruction(String),
    #[error("unknown profile `{0}` (expected quick or full)")]
    UnknownProfile(String),
    #[error("p must be an odd prime, got {0}")]
    InvalidPrime(u64),
    #[error("output precision M = {m} exceeds summation depth N = {n}")]
    PrecisionTooHigh { m: u32, n: u32 },
    #[error("precision must be at least 1")]
    ZeroPrecision,
    #[error("q must be ≡ 1 mod p (got q = {q}, p = {p})")]
    QNotCongruent { q: i64, p: u64 },
    #[error("translation shift must be at least 1, got {0}")]
    InvalidShift(i64),
    #[error("literal summation over {points} points exceeds the cap of {cap}")]
    SumTooLarge { points: u128, cap: u128 },
    #[error("denominator of {0} is not invertible mod p")]
    NotPadicUnit(String),
    #[error("identity `{0}` has an empty parameter grid")]
    EmptyGrid(String),
    #[error("identity `{0}`: equal polynomials evaluated to different values")]
    EvaluationMismatch(String),
    #[error("n_max must be at least 1")]
    NMaxTooSmall,
    #[error("identity `{id}` failed to build at n = {n}, alpha = {alpha}: {source}")]
    Builder {
        id: String,
        n: u32,
        alpha: u32,
        #[source]
        source: Box<Error>,
    },
    #[error("truncation order {k} is below the requested degree {n}")]
    TruncationTooLow { k: usize, n: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
