use thiserror::Error;

/// Errors produced by the estimator.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A model parameter is outside its domain.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// Swap statistics need a single connected component.
    #[error("topology graph is disconnected ({components} components)")]
    DisconnectedGraph { components: usize },

    /// Not enough independent sizes to fit a connectivity exponent.
    #[error("degenerate connectivity fit: {0}")]
    DegenerateFit(String),

    /// The distillation model cannot reach the requested output error.
    #[error("target magic-state error {target:e} unreachable from injection error {injection:e}")]
    UnachievableTarget { target: f64, injection: f64 },

    /// A computation left the real numbers (NaN, infinity).
    #[error("numeric domain error: {0}")]
    NumericDomain(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

/// Checks `lo < x <= hi` style ranges with readable messages.
pub(crate) fn check_open_closed(name: &'static str, x: f64, lo: f64, hi: f64) -> Result<()> {
    if x.is_finite() && x > lo && x <= hi {
        Ok(())
    } else {
        Err(invalid(name, format!("{x} is outside ({lo}, {hi}]")))
    }
}

pub(crate) fn check_open(name: &'static str, x: f64, lo: f64, hi: f64) -> Result<()> {
    if x.is_finite() && x > lo && x < hi {
        Ok(())
    } else {
        Err(invalid(name, format!("{x} is outside ({lo}, {hi})")))
    }
}

pub(crate) fn check_closed_open(name: &'static str, x: f64, lo: f64, hi: f64) -> Result<()> {
    if x.is_finite() && x >= lo && x < hi {
        Ok(())
    } else {
        Err(invalid(name, format!("{x} is outside [{lo}, {hi})")))
    }
}
