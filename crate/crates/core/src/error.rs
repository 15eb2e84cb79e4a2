//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by the exact-arithmetic layers.
///
/// Contract violations (a non-divisor where a divisor is required, a level
/// that does not divide the ambient level, ...) are reported as errors, not
/// panics, so that the CLI can map them to usage diagnostics.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("argument must be positive, got 0")]
    ZeroArgument,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("duplicate base {0} in quotient text")]
    DuplicateBase(u64),
    #[error("zero exponent for base {0}")]
    ZeroExponent(u64),
    #[error("operation undefined for the constant quotient (empty support)")]
    EmptySupport,
    #[error("{d} is not a divisor of {n}")]
    NotDivisor { d: u64, n: u64 },
    #[error("{d} does not exactly divide {n} (gcd(d, n/d) != 1)")]
    NotExactDivisor { d: u64, n: u64 },
    #[error("level {level} does not divide {n}")]
    LevelMismatch { level: u64, n: u64 },
    #[error("gcd({a}, {b}) != 1")]
    NotCoprime { a: u64, b: u64 },
    #[error("levels {0} and {1} are not coprime")]
    NonCoprimeLevels(u64, u64),
    #[error("weight vector must be defined on every divisor of {expected}; problem at {d}")]
    WeightsDomain { expected: u64, d: u64 },
    #[error("weight vector is not multiplicative at coprime split {d1} * {d2}")]
    WeightsNotMultiplicative { d1: u64, d2: u64 },
    #[error("admissibility inequality fails at prime {p}, exponent {j}")]
    WeightsInequality { p: u64, j: u32 },
    #[error("parameter {name} = {value} out of range")]
    OutOfRange { name: &'static str, value: i64 },
    #[error("search box exceeds the per-divisor cap at divisor {divisor} (bound {bound})")]
    CapExceeded { divisor: u64, bound: i64 },
    #[error("input quotient is not holomorphic on level {0}")]
    NotHolomorphic(u64),
    #[error("leading coefficient is not a unit; series cannot be inverted")]
    NonUnitLeading,
    #[error("requested precision {0} is too small")]
    PrecisionTooSmall(usize),
    #[error("no root of unity matches the two series")]
    NoMatchingUnit,
    #[error("series support point at u^{0} is off every t*n^2 grid with t | 24")]
    SupportOffGrid(i64),
    #[error("internal consistency check failed: {0}")]
    Inconsistency(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
