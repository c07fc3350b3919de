use thiserror::Error;

use crate::point::LadderPoint;

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),
    #[error("point {point} lies outside the space of {system}")]
    OutsideSpace { point: LadderPoint, system: String },
    #[error("{value} is outside the domain of {family}")]
    OutsideDomain { family: String, value: String },
    #[error("horizon must be at least {min}, got {got}")]
    HorizonTooSmall { min: usize, got: usize },
    #[error("prefix length {n} exceeds series length {len}")]
    PrefixOutOfRange { n: usize, len: usize },
    #[error("delta grid is empty")]
    EmptyGrid,
    #[error("delta grid must be positive and strictly increasing")]
    InvalidGrid,
    #[error("window start {window_start} must be below horizon {horizon}")]
    InvalidWindow { window_start: usize, horizon: usize },
    #[error("checkpoint {0} outside [1, horizon]")]
    InvalidCheckpoint(usize),
    #[error("tolerance {0} outside (0, 1/4)")]
    ToleranceOutOfRange(String),
    #[error("degenerate pair: the two points generate identical orbits")]
    DegeneratePair,
    #[error("iterate exponent must be at least 1")]
    ZeroIterate,
    #[error("no iterate index j qualifies as DC3 for edge ({0}, {1})")]
    NoQualifyingColor(usize, usize),
    #[error("exact clique search is capped at {cap} vertices, got {got}")]
    SizeCapExceeded { cap: usize, got: usize },
    #[error("graph needs at least {min} vertices, got {got}")]
    TooFewVertices { min: usize, got: usize },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
