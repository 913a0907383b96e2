use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("level index {level} outside 0..={bath_size}")]
    LevelOutOfRange { level: usize, bath_size: usize },

    #[error("argument outside its domain: {0}")]
    Domain(String),

    /// The conditioned state lost (numerically) all of its weight.
    #[error("measurement success probability {probability:e} below annihilation threshold")]
    Annihilated { probability: f64 },

    /// The bath is polarized to within the stopping tolerance; no further
    /// interval can be optimized.
    #[error("polarization converged (1 - P = {residual:e})")]
    Converged { residual: f64 },

    /// The state has no weight left that the flip-flop coupling can move, so
    /// no interval changes the polarization.
    #[error("polarization stalled (<J+J-> = {moment:e})")]
    Stalled { moment: f64 },

    #[error("dimension {dimension} exceeds the dense-simulation limit {limit}")]
    DimensionLimit { dimension: usize, limit: usize },

    #[error("eigendecomposition failed: {0}")]
    Eigen(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("calibration failed: {0}")]
    Calibration(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for the runtime signals a protocol run can end with, as opposed to
    /// malformed input.
    pub fn is_runtime_signal(&self) -> bool {
        matches!(self, Error::Annihilated { .. } | Error::Converged { .. } | Error::Stalled { .. })
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
