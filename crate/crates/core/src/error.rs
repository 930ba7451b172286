use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("operands live in different fields: {0}")]
    ContextMismatch(String),

    #[error("q = {q} is not a power of the characteristic {p}")]
    NotPowerOfCharacteristic { q: u64, p: u32 },

    #[error("field does not contain F_{q}")]
    MissingSubfield { q: u64 },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("modulus is not monic and irreducible over its base: {0}")]
    BadModulus(String),

    #[error("polynomial is not squarefree: gcd(f, f') = {gcd}")]
    NotSquarefree { gcd: String },

    #[error("exponent {exponent} is not a power of {q}")]
    NonQPowerExponent { exponent: usize, q: u64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("input vectors are linearly dependent")]
    Dependent,

    #[error("repeated roots: the coefficient of x is zero")]
    RepeatedRoots,

    #[error("{what} = {value} exceeds the configured cap {cap}")]
    CapExceeded { what: String, value: String, cap: u64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("hypotheses not met: {0}")]
    Hypothesis(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
