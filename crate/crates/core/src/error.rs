use thiserror::Error;

/// Errors produced by the solvers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is a perfect square")]
    PerfectSquareInput(u64),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("cannot compose elements of Z[sqrt({0})] and Z[sqrt({1})]")]
    MixedModulus(u64, u64),

    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u64),

    #[error("ell = {0} is not supported (P(4, r) = r^2 is the square case)")]
    UnsupportedEll(u64),

    #[error("need m > n > 1, got m = {m}, n = {n}")]
    InvalidOrdering { m: u64, n: u64 },

    /// No power of the fundamental unit meets either congruence condition
    /// modulo `q`. This certifies only that the unit construction yields
    /// nothing; it does not prove the polygonal relation unsolvable.
    #[error("conditions not satisfiable: no power of the fundamental solution for m = {m} meets the congruence conditions mod q = {q} (ell = {ell})")]
    NoTheoremSolutions { ell: u64, m: u64, q: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
