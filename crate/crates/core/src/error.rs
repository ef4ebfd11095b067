use std::fmt;

/// Error type shared by every layer of the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument is outside the stated domain of the formula.
    Domain(String),
    /// The inputs collapse the object being built (e.g. a zero-width range).
    Degenerate(String),
    /// A quantity is provably or numerically infinite.
    Divergence(String),
    /// An iterative search hit its cap without meeting its stopping rule.
    Convergence(String),
    /// Two inputs that must describe the same experiment do not match.
    Mismatch(String),
    /// The configuration file is malformed or inconsistent.
    Config(String),
    /// A Monte Carlo aggregate left the finite range of `f64`.
    Overflow(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::Degenerate(m) => write!(f, "degenerate input: {m}"),
            Error::Divergence(m) => write!(f, "divergence: {m}"),
            Error::Convergence(m) => write!(f, "convergence failure: {m}"),
            Error::Mismatch(m) => write!(f, "mismatch: {m}"),
            Error::Config(m) => write!(f, "config error: {m}"),
            Error::Overflow(m) => write!(f, "overflow: {m}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
