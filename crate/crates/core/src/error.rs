use thiserror::Error;

use crate::scheme::SchemeViolation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid attribute specification: {0}")]
    InvalidSpec(String),

    #[error("dimension mismatch: expected {expected} attributes, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("attribute {attribute} has value {value}, but its cardinality is {cardinality}")]
    ValueOutOfRange {
        attribute: usize,
        value: u32,
        cardinality: u32,
    },

    #[error("attribute {0} is not hidden in the bundle")]
    NotHidden(usize),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("bidder {index} out of range ({count} bidders)")]
    BidderOutOfRange { index: usize, count: usize },

    #[error("invalid hiding scheme: {0}")]
    InvalidScheme(SchemeViolation),

    #[error("the matching heuristic requires binary attributes; attribute {attribute} has {cardinality} values")]
    NonBinaryAttributes { attribute: usize, cardinality: u32 },

    #[error("brute force is capped at {cap} candidate bundles but {count} were found; use exact_optimum instead")]
    BruteForceCap { cap: usize, count: usize },

    #[error("tree solution was computed for a different instance")]
    InstanceMismatch,

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("bound ordering violated in trial {trial}: {detail}")]
    SandwichViolation { trial: u64, detail: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
