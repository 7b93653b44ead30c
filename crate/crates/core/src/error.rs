use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// A configuration or distribution parameter is out of range.
    Config(String),
    /// No per-day rate reproduces the pair's encounter count.
    Calibration { pair: (u32, u32), reason: String },
    /// A schedule handed to the assembler breaks a trace invariant.
    Assembly { pair: (u32, u32), reason: String },
    /// A query referenced a user or time outside the trace.
    Query(String),
    /// A distribution was requested from zero samples.
    EmptyDistribution,
    /// Two distributions cannot be compared.
    Comparison(String),
    /// Too few samples for the requested statistic.
    InsufficientData { needed: usize, got: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Config(msg) => write!(f, "invalid configuration: {msg}"),
            Error::Calibration { pair, reason } => {
                write!(f, "calibration failed for pair ({}, {}): {reason}", pair.0, pair.1)
            }
            Error::Assembly { pair, reason } => {
                write!(f, "invalid schedule for pair ({}, {}): {reason}", pair.0, pair.1)
            }
            Error::Query(msg) => write!(f, "invalid query: {msg}"),
            Error::EmptyDistribution => f.write_str("no intercontact-time samples"),
            Error::Comparison(msg) => write!(f, "cannot compare distributions: {msg}"),
            Error::InsufficientData { needed, got } => {
                write!(f, "insufficient data: need at least {needed} samples, got {got}")
            }
        }
    }
}

impl core::error::Error for Error {}
