use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("empty polynomial text")]
    EmptyInput,

    #[error("unknown variable '{found}' at offset {offset} (only U and V are allowed)")]
    UnknownVariable { offset: usize, found: char },

    #[error("{what} = {size} exceeds the enumeration budget of {limit}")]
    BudgetExceeded {
        what: &'static str,
        size: String,
        limit: u64,
    },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{0} is not squarefree")]
    NotSquarefree(u64),

    #[error("f(n, V) vanishes identically at n = {n}")]
    ZeroSpecialization { n: BigInt },

    #[error("empty prime range [{p_min}, {p_max}]")]
    EmptyPrimeRange { p_min: u64, p_max: u64 },

    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),

    #[error("certificate rejected: {0}")]
    Certificate(String),

    #[error(
        "no pseudopoint below {ceiling} ({disqualified} admissible candidates had integer points)"
    )]
    NotFound { ceiling: String, disqualified: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
