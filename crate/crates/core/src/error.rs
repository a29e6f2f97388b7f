use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid {name}: {value} ({reason})")]
    Validation {
        name: String,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid range for {name}: [{lo}, {hi}] with {n} samples")]
    InvalidRange { name: String, lo: f64, hi: f64, n: usize },

    #[error("single-well configuration: 9A^2 = {nine_a_sq} is not above 32B = {thirty_two_b}")]
    SingleWell { nine_a_sq: f64, thirty_two_b: f64 },

    #[error("flat well: quadratic coefficient B is zero")]
    FlatWell,

    #[error("degenerate transition: {0}")]
    DegenerateTransition(String),

    #[error("transition {from} -> {to} is not downhill")]
    UphillTransition { from: String, to: String },

    #[error("unstable time step: dt = {dt:e} s exceeds the limit {limit:e} s ({term})")]
    Unstable { dt: f64, limit: f64, term: &'static str },

    #[error("non-finite value encountered at step {step}")]
    NonFinite { step: usize },

    #[error("amplitude saturated after {step} steps (y = {y:e})")]
    Saturated { step: usize, y: f64 },

    #[error("missing key `{0}`")]
    MissingKey(String),

    #[error("cannot parse `{key}`: {message}")]
    Parse { key: String, message: String },

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn validation(name: impl Into<String>, value: f64, reason: &'static str) -> Self {
        Error::Validation {
            name: name.into(),
            value,
            reason,
        }
    }

    /// True for failures of the numerical machinery rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Unstable { .. } | Error::NonFinite { .. } | Error::Saturated { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

/// Checks that `value` is finite and strictly positive.
pub(crate) fn positive(name: &str, value: f64) -> Result<f64> {
    if !value.is_finite() {
        return Err(Error::validation(name, value, "must be finite"));
    }
    if value <= 0.0 {
        return Err(Error::validation(name, value, "must be positive"));
    }
    Ok(value)
}

pub(crate) fn finite(name: &str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::validation(name, value, "must be finite"))
    }
}
