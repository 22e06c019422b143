use thiserror::Error;

/// Errors reported by the library and the command-line front end.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("partition {0} has no infinite part")]
    NoInfinitePart(String),

    #[error("part {part} of {partition} exceeds e+1 = {bound}")]
    PartTooLarge {
        partition: String,
        part: String,
        bound: u64,
    },

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("incompatible compositions: {0}")]
    Incompatible(String),

    #[error("point set is not distinct-coordinate: {0}")]
    NotDistinct(String),

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("the zero polynomial has no discriminant witness")]
    ZeroPolynomial,

    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
