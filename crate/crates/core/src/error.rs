use alloc::string::String;
use core::fmt;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An input violated an operation's precondition.
    Parameter(String),
    /// A mesh element has zero or negative signed area.
    DegenerateElement { element: usize, area: f64 },
    /// An iterative method stopped before reaching its tolerance.
    Convergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },
    /// A numeric procedure failed (no bracket, integration blew up, ...).
    Numeric(String),
    /// No closed-form relative isoperimetric constant is registered for the domain.
    NoKnownConstant(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parameter(msg) => write!(f, "parameter error: {msg}"),
            Error::DegenerateElement { element, area } => {
                write!(f, "degenerate element {element} (signed area {area:e})")
            }
            Error::Convergence {
                what,
                iterations,
                residual,
            } => write!(
                f,
                "{what} did not converge after {iterations} iterations (last residual {residual:e})"
            ),
            Error::Numeric(msg) => write!(f, "numeric error: {msg}"),
            Error::NoKnownConstant(msg) => write!(f, "no known isoperimetric constant: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
