use thiserror::Error;

/// Errors raised by the verification engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: String, right: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("capacity exceeded: {what} needs {needed}, limit is {limit}")]
    Capacity {
        what: String,
        needed: u128,
        limit: u128,
    },

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("presentation mismatch: `{0}` vs `{1}`")]
    PresentationMismatch(String, String),

    #[error("invalid relation for `{generator}`: {reason}")]
    InvalidRelation { generator: String, reason: String },

    #[error("presentation `{name}` is not confluent at overlap {overlap}")]
    NotConfluent { name: String, overlap: String },

    #[error("monomial {0} is not in normal form")]
    NotNormalForm(String),

    #[error("element is not of top degree {expected} (found degrees {found:?})")]
    NotTopDegree { expected: u32, found: Vec<u32> },

    #[error("`{0}` is not a tautological class with a quadratic relation")]
    NotTautological(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("inconsistent input: {0}")]
    Inconsistent(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
