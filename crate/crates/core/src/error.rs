//! Error taxonomy for the whole workbench.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoslabError {
    #[error("polynomial is identically zero")]
    IdenticallyZero,

    #[error("invalid period {0}: must be a positive integer")]
    InvalidP(usize),

    #[error("partition inconsistent with coefficients: {0}")]
    InconsistentPartition(String),

    #[error("index range too short: {0}")]
    RangeTooShort(String),

    #[error("no root of unity divides the annihilator polynomial")]
    NoUnityRoots,

    #[error("sequence is not periodic on the verification range: {0}")]
    NotPeriodicOnRange(String),

    #[error("no admissible epsilon in the candidate budget: {0}")]
    EpsilonSearchFailed(String),

    #[error("no periodic structure found: {0}")]
    NoStructureFound(String),

    #[error("frequency box too small: need at least {need}, got {got}")]
    BoxTooSmall { need: usize, got: usize },

    #[error("requested tolerance {requested:e} below the working-precision floor {floor:e}")]
    ToleranceUnachievable { requested: f64, floor: f64 },

    #[error("sign could not be certified (possible zero of even multiplicity near t = {near})")]
    AmbiguousSign { near: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, CoslabError>;
