use thiserror::Error;

use crate::rootfind::RootError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParam { field: &'static str, reason: String },

    #[error("defender speed {speed} is below the critical speed {critical}")]
    SubcriticalSpeed { speed: f64, critical: f64 },

    /// The speed equals the critical speed: the region is held but never grows.
    #[error("defender speed {speed} equals the critical speed; the region cannot expand")]
    NoExpansion { speed: f64 },

    #[error("defender speed {speed} must exceed the invader speed {invader_speed}")]
    SpeedTooLow { speed: f64, invader_speed: f64 },

    /// The requested final radius does not lie strictly between `R0` and the asymptote.
    #[error("target radius {target} is not reachable from {start} (asymptote {asymptote})")]
    TargetOutOfRange {
        target: f64,
        start: f64,
        asymptote: f64,
    },

    #[error("root not found: {0}")]
    RootNotFound(#[from] RootError),

    #[error("simulator configuration: {0}")]
    SimConfig(String),
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParam {
            field,
            reason: reason.into(),
        }
    }
}
