//! Error type shared by every module in the crate.

use thiserror::Error;

/// Rejections of invalid inputs. Internal arithmetic corruption (inexact
/// division, non-integer exponent sums) is a bug, not an input error, and
/// panics instead.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus p must be at least 2, got {0}")]
    InvalidModulus(u32),

    #[error("partition {0} is not {1}-class regular (it has a part divisible by {1})")]
    NotClassRegular(String, u32),

    #[error("partition {0} is not {1}-regular (it has a part of multiplicity >= {1})")]
    NotRegular(String, u32),

    #[error("partition {0} is not strict (parts must be distinct)")]
    NotStrict(String),

    #[error("product forms have different base p: {0} vs {1}")]
    ModulusMismatch(u32, u32),

    #[error("division by zero polynomial")]
    DivisionByZero,

    #[error("gcd of two zero polynomials is undefined")]
    GcdOfZeros,

    #[error("matrix is not square: {rows} rows, {cols} cols")]
    NotSquare { rows: usize, cols: usize },

    #[error("invalid diagram cell: {0}")]
    InvalidCell(String),

    #[error("no block of C_{n}(q) has core {core} and weight {weight}")]
    UnknownBlock { n: u32, core: String, weight: u32 },

    #[error("the elementary-divisor conjecture is stated for prime p; p = {0} is not prime")]
    NonPrimeModulus(u32),

    #[error("unknown statement id {0:?}")]
    UnknownStatement(String),

    #[error("parameter out of configured range: {0}")]
    OutOfRange(String),

    #[error("cache i/o: {0}")]
    CacheIo(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}
