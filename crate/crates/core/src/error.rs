use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown element `{0}`")]
    UnknownElement(String),

    #[error("duplicate element `{0}`")]
    DuplicateElement(String),

    #[error("order relation has a cycle through `{0}`")]
    Cycle(String),

    #[error("`{lower} < {upper}` is not a cover: `{via}` lies strictly between")]
    NotACover {
        lower: String,
        upper: String,
        via: String,
    },

    #[error("not a lattice: `{0}` and `{1}` have no {2}")]
    NotALattice(String, String, &'static str),

    #[error("{0}")]
    InvalidArgument(String),

    #[error("lattice is not modular")]
    NotModular,

    #[error("connection maps violate the axioms: {0}")]
    Axioms(String),

    #[error("reconstruction failed: {0}")]
    Reconstruction(String),

    #[error("resource cap of {cap} exceeded ({what})")]
    CapExceeded { cap: usize, what: String },

    #[error("oracle mismatch: {0}")]
    OracleMismatch(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
