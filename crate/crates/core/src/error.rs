use thiserror::Error;

/// Errors raised by the operators, norms and solvers in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter lies outside its admissible range.
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// A Mittag-Leffler evaluation could not be certified to the target tolerance.
    #[error(
        "Mittag-Leffler E({alpha}, {beta}) at z = {z} could not be certified (error estimate {estimate:e})"
    )]
    Uncertified {
        alpha: f64,
        beta: f64,
        z: f64,
        estimate: f64,
    },

    /// Two objects that must share a grid or a mode count do not.
    #[error("shape mismatch: {0}")]
    Mismatch(String),

    /// Input contains NaN or infinite samples.
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    /// A time was requested that is not a node of the grid.
    #[error("t = {0} is not a grid node")]
    NotOnGrid(f64),

    /// A spatial point outside the interval [0, L].
    #[error("x = {x} lies outside [0, {length}]")]
    OutOfDomain { x: f64, length: f64 },

    /// A normalising quantity vanished.
    #[error("degenerate input: {0}")]
    Degenerate(&'static str),
}

impl Error {
    /// True for errors that stem from numerical certification rather than input validation.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Uncertified { .. })
    }

    pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
