use thiserror::Error;

/// Errors raised by group construction, complex building and enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what} exceeds cap {limit}")]
    OverCap { what: &'static str, limit: usize },

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("subgroup is not normal")]
    NotNormal,

    #[error("operation undefined on the trivial group")]
    TrivialGroup,

    #[error("homomorphism is not surjective")]
    NotSurjective,

    #[error("vertex label sets differ")]
    LabelMismatch,

    #[error("direct product hypothesis fails: {0}")]
    BadProductHypothesis(String),

    #[error("coset enumeration overflowed {max_cosets} cosets")]
    Overflow { max_cosets: usize },

    #[error("fixed-width integer arithmetic overflowed")]
    ArithmeticOverflow,

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
