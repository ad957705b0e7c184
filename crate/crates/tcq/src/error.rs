use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// the first-order expansion is not trustworthy for this block
    #[error(
        "expansion invalid at (twice_j={twice_j}, k={k}): gate value {gate:.3e} >= 1"
    )]
    ExpansionInvalid { twice_j: u64, k: u64, gate: f64 },

    #[error("n = {n} exceeds the exact-path ceiling of {max}; use the perturbative path")]
    TooLarge { n: u64, max: u64 },

    /// an expectation picked up non-negligible weight at the edge of its window
    #[error("tail mass violation: edge contribution {edge:.3e} exceeds tolerance {tolerance:.3e}")]
    TailMass { edge: f64, tolerance: f64 },

    /// a verification the caller asked for did not hold
    #[error("check failed: {0}")]
    CheckFailed(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
