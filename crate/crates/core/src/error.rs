use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("character has {got} exponents but the presentation has {expected} generators")]
    GeneratorCountMismatch { expected: usize, got: usize },

    #[error("polynomial variable counts differ ({0} vs {1})")]
    VariableCountMismatch(usize, usize),

    #[error("unknown generator index {0}")]
    UnknownGenerator(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("inversion of zero in the cyclotomic field")]
    DivisionByZero,

    #[error("word is not in the commutator subgroup: {0}")]
    NotInCommutator(String),

    #[error("presentation is not a Zariski presentation: {0}")]
    NotZariski(String),

    #[error("invalid character: {0}")]
    InvalidCharacter(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("homomorphism check failed: {0}")]
    InvalidHom(String),

    #[error("quotient map is not surjective: {0}")]
    NotSurjective(String),

    #[error("scan budget exceeded: {count} characters > budget {budget}; restrict with a coordinate mask")]
    BudgetExceeded { count: u128, budget: u128 },

    #[error("depth methods disagree: fox gives {fox}, invariant gives {invariant}")]
    MethodDisagreement { fox: usize, invariant: usize },

    #[error("duplicate line {0} in arrangement")]
    DuplicateLine(usize),

    #[error("arrangement error: {0}")]
    Arrangement(String),

    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("inconsistent data: {0}")]
    Inconsistent(String),
}

impl Error {
    pub fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, col, msg: msg.into() }
    }

    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse { .. })
    }
}
