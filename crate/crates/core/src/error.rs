use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("invalid rate {0}: must lie in [0, 1]")]
    InvalidRate(f64),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    /// The state is (numerically) pure, so quantities normalised by `1 - lambda_1` are undefined.
    #[error("degenerate state: 1 - lambda_1 = {gap:e} is too small")]
    Degenerate { gap: f64 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid size: {0}")]
    InvalidSize(String),

    #[error("invalid sampling distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid observable: {0}")]
    InvalidObservable(String),

    #[error("x = {x} lies on a pole of the secular equation (D = {pole})")]
    Pole { x: f64, pole: f64 },

    #[error("numerical rank deficiency: {0}")]
    NumericalRank(String),

    #[error("fit error: {0}")]
    Fit(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
