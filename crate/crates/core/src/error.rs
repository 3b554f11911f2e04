use thiserror::Error;

use crate::exact::FieldError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("invalid rank data: n = {n}, m = {m}")]
    InvalidRank { n: usize, m: usize },
    #[error("unknown current `{0}`")]
    UnknownLabel(String),
    #[error("level k = {value} is excluded for n = {n}")]
    ExcludedLevel { n: usize, value: String },
    #[error("fields are not mutually local: (z-w) exponent {0} is not an integer")]
    NonLocal(String),
    #[error("expansion was truncated at order {depth}; order {wanted} was requested")]
    Truncated { depth: i64, wanted: i64 },
    #[error("{0} is not defined for this realization")]
    Undefined(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("solution is not unique: {0}")]
    NotUnique(String),
    #[error("state exceeds the level cutoff {0}")]
    Cutoff(usize),
    #[error("{0}")]
    Usage(String),
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
