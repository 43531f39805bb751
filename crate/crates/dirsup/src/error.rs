//! Crate-wide error type.

use std::fmt;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the numerical operations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation.
    Domain(String),
    /// Index or bound exceeds a precomputed table or stored range.
    Range(String),
    /// An integer has a prime factor above the allowed smoothness bound.
    Smoothness { n: u64, factor: u64 },
    /// Dimension or coverage mismatch between two objects.
    Shape(String),
    /// The request exceeds a hard cost guard (enumeration or grid size).
    Budget(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn range(msg: impl Into<String>) -> Self {
        Error::Range(msg.into())
    }

    pub fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }

    pub fn budget(msg: impl Into<String>) -> Self {
        Error::Budget(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Range(msg) => write!(f, "range error: {msg}"),
            Error::Smoothness { n, factor } => {
                write!(f, "smoothness error: {n} has prime factor {factor} above the bound")
            }
            Error::Shape(msg) => write!(f, "shape error: {msg}"),
            Error::Budget(msg) => write!(f, "budget error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}
