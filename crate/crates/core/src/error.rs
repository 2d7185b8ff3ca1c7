use std::io;

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("negative probability {value} at index {index}")]
    NegativeProbability { index: usize, value: f64 },

    #[error("non-finite probability at index {index}")]
    NonFiniteProbability { index: usize },

    #[error("probabilities sum to {sum}, expected 1")]
    NotNormalized { sum: f64 },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid variable subset {0:?}")]
    BadSubset(Vec<usize>),

    #[error("target and conditioning variables overlap: {0:?}")]
    OverlappingSets(Vec<usize>),

    #[error("variable groups are not pairwise disjoint or reference missing axes")]
    BadPartition,

    #[error("empirical estimator needs at least one sample")]
    EmptySample,

    #[error("information measure evaluated to {0} bits, below numerical-noise tolerance")]
    NegativeInformation(f64),

    #[error("search configuration enables no strategy")]
    BudgetZero,

    #[error("budget exceeded: {what} needs {needed}, limit {limit}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        limit: u128,
    },

    #[error("degenerate rate assignment for layer {layer}: {reason}")]
    DegenerateRates { layer: usize, reason: String },

    #[error("encoder failure: {0}")]
    EncoderFailure(EncoderFailure),

    #[error("decoder failure at layer {layer}: {candidates} jointly typical candidates")]
    DecodeFailure { layer: usize, candidates: usize },

    #[error("posterior has no support: every consistent codeword tuple has zero likelihood")]
    ZeroEvidence,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Why the encoder declined an observation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum EncoderFailure {
    #[error("source block is not typical")]
    AtypicalSource,
    #[error("no codeword in layer {0} is jointly typical with the observation")]
    NoTypicalCodeword(usize),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
