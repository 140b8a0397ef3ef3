//! Error type shared by every module of the crate.

use std::fmt;

#[derive(Debug)]
pub enum Error {
    /// A mathematical precondition was violated (bad exponent range,
    /// non-integrable weight, negative mass, vacuum with momentum, ...).
    Domain(String),
    /// A run configuration is inconsistent or cannot be honored.
    Config(String),
    /// The time integration had to abort (CFL violation, positivity loss,
    /// support reaching the domain boundary).
    Solver(String),
    Io(std::io::Error),
    Json(serde_json::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {}", msg),
            Error::Config(msg) => write!(f, "config error: {}", msg),
            Error::Solver(msg) => write!(f, "solver error: {}", msg),
            Error::Io(e) => write!(f, "io error: {}", e),
            Error::Json(e) => write!(f, "json error: {}", e),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e)
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Shorthand for `Error::Domain` with a formatted message.
macro_rules! domain_err {
    ($($arg:tt)*) => {
        $crate::error::Error::Domain(format!($($arg)*))
    };
}

pub(crate) use domain_err;
