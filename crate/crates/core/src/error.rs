use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter lies outside its admissible domain.
    #[error("parameter `{name}` = {value} is outside its domain: {reason}")]
    ParameterDomain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// Two vectors that must share a length do not.
    #[error("dimension mismatch: expected length {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    /// A survival probability underflowed below the representable range
    /// of the linear-scale API.
    #[error("survival probability underflows at x = {x}")]
    Overflow { x: f64 },

    /// A function produced a non-finite value during a scan.
    #[error("non-finite value {value} at x = {x}")]
    Evaluation { x: f64, value: f64 },

    /// A grid could not be constructed.
    #[error("invalid grid: {0}")]
    Grid(String),

    /// Malformed scenario text.
    #[error("line {line}: field `{field}`: {message}")]
    Parse {
        line: usize,
        field: String,
        message: String,
    },

    #[error("unknown identifier `{0}`")]
    Unknown(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::ParameterDomain {
            name,
            value,
            reason: "must be positive and finite",
        })
    }
}

pub(crate) fn ensure_open_unit(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(Error::ParameterDomain {
            name,
            value,
            reason: "must lie in the open interval (0, 1)",
        })
    }
}
