use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid direction ({x}, {y}, {z}): |r|^2 = {norm_sq}")]
    InvalidDirection { x: f64, y: f64, z: f64, norm_sq: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("impossible outcome: {0}")]
    ImpossibleOutcome(String),

    #[error("weights sum to {sum}, expected 1")]
    Normalization { sum: f64 },

    #[error("grid error: {0}")]
    Grid(String),

    #[error("integration did not converge after {steps} steps (J1 = {j1})")]
    Integration { steps: u64, j1: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization: {0}")]
    Serialization(String),
}

impl Error {
    /// Stable machine-readable code, emitted in CLI error objects.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidDirection { .. } => "invalid_direction",
            Error::InvalidState(_) => "invalid_state",
            Error::ImpossibleOutcome(_) => "impossible_outcome",
            Error::Normalization { .. } => "normalization",
            Error::Grid(_) => "grid",
            Error::Integration { .. } => "integration",
            Error::InvalidInput(_) => "invalid_input",
            Error::Io { .. } => "io",
            Error::Serialization(_) => "serialization",
        }
    }
}
