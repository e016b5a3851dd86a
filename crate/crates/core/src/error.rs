use thiserror::Error;

use crate::host::EdgeId;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("copy size r={r} out of range 1..={t}")]
    RangeError { r: usize, t: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("color {color} is not in the palette (n1={n1}, n2={n2})")]
    PaletteMismatch { color: u32, n1: u32, n2: u32 },

    #[error("line {line}: duplicate or out-of-order edge {edge}")]
    DuplicateEdge { line: usize, edge: EdgeId },

    #[error("edge {0} is uncolored")]
    Uncolored(EdgeId),

    #[error("copy is not bad")]
    NotBad,

    #[error("operation requires a {expected} host")]
    WrongHost { expected: &'static str },

    #[error("{what}: {needed} items exceed the guard of {guard}")]
    GuardExceeded { what: &'static str, needed: u128, guard: u128 },

    #[error("malformed template: {0}")]
    MalformedTemplate(String),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
