use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("expected a positive integer, got 0")]
    ZeroArgument,

    #[error("{0} is not an odd prime")]
    NotOddPrime(i64),

    #[error("{g} is not a primitive root modulo {p}")]
    NotGenerator { p: u64, g: u64 },

    #[error("prime {p} is not congruent to {residue} modulo {modulus}")]
    WrongResidue { p: u64, residue: u64, modulus: u64 },

    #[error("character of order {0} takes values outside Q(i)")]
    OrderNotDividingFour(u64),

    #[error("{d} is divisible by the modulus {p}")]
    NotCoprime { d: i64, p: u64 },

    #[error("index {index} outside the admissible range 1..={max}")]
    OutOfRange { index: u64, max: u64 },

    #[error("truncation orders differ: {0} vs {1}")]
    TruncationMismatch(usize, usize),

    #[error("{0} is not of the form 2q+1 with q prime and q = 1 mod 4")]
    NotSafePrime(u64),

    #[error("the character must be odd")]
    EvenCharacter,

    #[error("the character must be non-trivial")]
    TrivialCharacter,

    #[error("malformed identity configuration: {0}")]
    MalformedIdentity(String),

    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },
}
