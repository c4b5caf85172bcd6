use thiserror::Error;

/// Errors raised by the analytic bounds, the allocation solver and the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("density is unbounded: both SIR thresholds are zero")]
    UnboundedDensity,

    #[error("stationarity function has no sign change on [{lo}, {hi}]")]
    BracketFailure { lo: f64, hi: f64 },

    #[error("quantization gain {gamma} is not positive; increase the feedback bits")]
    VacuousGain { gamma: f64 },

    #[error("density inversion did not converge: {0}")]
    NonConvergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

/// Rejects NaN and infinities.
pub(crate) fn finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(invalid(name, format!("must be finite, got {value}")))
    }
}
