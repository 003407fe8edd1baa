use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("index ({row}, {col}) out of range for a {rows}x{cols} matrix")]
    OutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("malformed hex row {row:?}: {reason}")]
    Hex { row: String, reason: String },

    #[error("boundary squared is nonzero at degree {degree}, basis element {element}")]
    BoundarySquared { degree: usize, element: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("betti vector violates Poincare duality: {0}")]
    Duality(String),

    #[error("simplicial identity `{axiom}` fails at level {q} (i = {i}, j = {j})")]
    Axiom {
        axiom: &'static str,
        q: usize,
        i: usize,
        j: usize,
    },

    #[error("quotient does not descend: {0}")]
    Descent(String),

    #[error("truncation too shallow: {0}")]
    Truncation(String),

    #[error("group action is not regular after {rounds} round(s): {detail}")]
    Irregular { rounds: usize, detail: String },

    #[error("estimated {estimate} orbit cells exceeds the cap of {cap}")]
    CellCap { estimate: u128, cap: u128 },

    #[error("non-integral result: {0}")]
    NonIntegral(String),

    #[error("tuple touches the diagonal: points {0} and {1} coincide")]
    OnDiagonal(usize, usize),

    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("{0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
