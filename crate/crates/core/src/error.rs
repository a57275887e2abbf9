//! Error taxonomy shared across the crate.
//!
//! `Parse`, `Validation` and `Domain` describe problems with the caller's
//! input. `Inconsistency` means an internal cross-check failed and the result
//! cannot be trusted; callers should treat it as an alarm, not as a value.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The input text could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// The parsed diagram violates a structural requirement.
    #[error("validation error: {0}")]
    Validation(String),

    /// The request is outside the operation's domain (wrong dimensions,
    /// disconnected diagram where a connected one is required, and so on).
    #[error("domain error: {0}")]
    Domain(String),

    /// An internal consistency check failed; the computation is aborted
    /// rather than returning an untrustworthy value.
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    /// The independent cross-check could not produce an unambiguous answer.
    #[error("ambiguous result: {0}")]
    Ambiguous(String),

    /// Numeric evaluation hit a vanishing denominator.
    #[error("denominator vanishes at the evaluation point (|den| = {residual:.3e})")]
    DenominatorVanished { residual: f64 },
}

impl Error {
    /// Stable machine-readable kind for CLI error reporting.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "parse",
            Error::Validation(_) => "validation",
            Error::Domain(_) => "domain",
            Error::Inconsistency(_) => "inconsistency",
            Error::Ambiguous(_) => "ambiguous",
            Error::DenominatorVanished { .. } => "denominator_vanished",
        }
    }

    /// Process exit code the CLI maps this error to: 1 for input problems,
    /// 2 for internal alarms.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::Validation(_) | Error::Domain(_) => 1,
            Error::Inconsistency(_) | Error::Ambiguous(_) => 2,
            Error::DenominatorVanished { .. } => 1,
        }
    }
}
