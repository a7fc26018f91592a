use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("valuation undefined for zero")]
    ValuationOfZero,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{value} is not coprime to {p}")]
    NotCoprime { value: String, p: u64 },

    #[error("use the mod-8 rule for p = 2")]
    EvenPrime,

    #[error("not a unit in Z[[x]]: constant term {0}")]
    NotAUnit(String),

    #[error("series known through order {have}, order {needed} required")]
    InsufficientOrder { needed: usize, have: usize },

    #[error("order mismatch: {0}")]
    OrderMismatch(String),

    #[error("input outside theorem hypotheses: {0}")]
    OutsideHypotheses(String),

    #[error("engine precondition failed: {0}")]
    EngineMismatch(String),

    #[error("modulus {0} exceeds the oracle bound")]
    ModulusTooLarge(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A broken internal invariant: exact division failed or a product check
    /// did not reproduce the target. Always a bug, never an input problem.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
