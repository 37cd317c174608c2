use thiserror::Error;

/// Errors raised by the exact-arithmetic layers.
///
/// Every variant names the precondition that was violated so callers (and the
/// CLI) can report it verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("valuation of zero is undefined")]
    UndefinedValuation,

    #[error("argument must be nonzero")]
    ZeroArgument,

    #[error("invalid modulus {modulus}: {reason}")]
    InvalidModulus { modulus: String, reason: &'static str },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("cyclotomic order {order} outside supported range 1..={bound}")]
    OrderOutOfBounds { order: u64, bound: u64 },

    #[error("cannot embed order {from} into order {to}: {from} does not divide {to}")]
    IncompatibleOrder { from: u64, to: u64 },

    #[error("slopes must be pairwise distinct (non-transverse triple)")]
    NonTransverse,

    #[error("out of domain: {0}")]
    OutOfDomain(&'static str),

    #[error("gcd({a}, {c}) = {gcd} > 1; arguments must be coprime")]
    NonCoprime { a: i64, c: u64, gcd: u64 },

    #[error("level {level} is below the stabilization floor {floor}")]
    BelowStabilizationFloor { level: u32, floor: u32 },

    #[error("Weil oracle failed to stabilize: {0}")]
    StabilizationFailure(String),

    #[error("value exceeds the supported range: {0}")]
    TooLarge(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unknown law '{0}'")]
    UnknownLaw(String),
}

pub type Result<T> = std::result::Result<T, Error>;
