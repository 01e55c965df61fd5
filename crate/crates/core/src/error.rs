use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("zero denominator at position {pos}")]
    ZeroDenominator { pos: usize },
    #[error("operands live in different rings")]
    RingMismatch,
    #[error("exponent overflow (limit 65535)")]
    ExponentOverflow,
    #[error("polynomial is not bihomogeneous")]
    NotBihomogeneous,
    #[error("quotient is not Artinian: no power of {var} lies in the initial ideal")]
    NotArtinian { var: String },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("theorem check failed: {0}")]
    Theorem(String),
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Theorem(_) => 1,
            Error::Inconsistency(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
