use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("field exponent r = {0} out of range (1..=16)")]
    ExponentOutOfRange(u32),

    #[error("modulus {modulus:#x} has degree {found}, expected {expected}")]
    ModulusDegree { modulus: u32, expected: u32, found: u32 },

    #[error("modulus {modulus:#x} is reducible: divisible by {factor:#x}")]
    ReducibleModulus { modulus: u32, factor: u32 },

    #[error("element {value:#x} is not in GF({q})")]
    ElementOutOfRange { value: u32, q: u32 },

    #[error("a_param {0:#x} has trace 0, so z^2 + z + a is reducible")]
    BadQuadraticParameter(u32),

    #[error("division by zero")]
    DivisionByZero,

    #[error("argument must be nonzero: {0}")]
    ZeroArgument(&'static str),

    #[error("enumeration budget exceeded: {what} needs {needed}, limit {limit}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        limit: u128,
    },

    #[error("invalid double coset spec: {0}")]
    InvalidSpec(String),

    #[error("outside the domain of the recursive formula: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}
