use thiserror::Error;

/// Errors raised by the numerical kernels and the checks built on them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole of the gamma function at {0}")]
    Pole(String),
    #[error("series or quadrature failed to reach the requested accuracy: {0}")]
    Accuracy(String),
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("hypergeometric series does not terminate")]
    NonTerminating,
    #[error("bottom parameter hits a pole inside the terminating sum: {0}")]
    BottomPole(String),
    #[error("probe point is degenerate: |P| = {0:e}")]
    ProbeDegenerate(f64),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
