use thiserror::Error;

use crate::fusion_data::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown irrep label `{0}`")]
    UnknownLabel(String),

    #[error("index ({row}, {col}) out of range for irrep `{irrep}` of dimension {dim}")]
    IndexOutOfRange {
        irrep: String,
        row: usize,
        col: usize,
        dim: usize,
    },

    #[error("fusion product {a} x {b} leaves the truncation window")]
    TruncationOverflow { a: String, b: String },

    #[error("instance `{0}` is not of Kac type")]
    NonKacInstance(String),

    #[error("instance provides no norm oracle")]
    NoNormOracle,

    #[error("unknown centrality mode `{0}` (expected `commutator` or `scalar-blocks`)")]
    UnknownMode(String),

    #[error("centrality modes disagree: {0}")]
    ModeDisagreement(String),

    #[error("malformed instance: {0}")]
    Malformed(String),

    #[error("invalid group table: {0}")]
    InvalidGroup(String),

    #[error("invalid irreducible representations: {0}")]
    InvalidIrreps(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("instance failed validation: {0}")]
    Validation(ValidationReport),

    #[error("space mismatch: expected `{expected}`, found `{found}`")]
    SpaceMismatch { expected: String, found: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
