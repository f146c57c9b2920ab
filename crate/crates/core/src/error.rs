use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain is unbounded: {0}")]
    Unbounded(String),

    #[error("point lies outside the domain: {0}")]
    OutsideDomain(String),

    #[error("map has a pole at the evaluation point: {0}")]
    Pole(String),

    #[error("point is not on the boundary (defining value {0:e})")]
    NotOnBoundary(f64),

    #[error("degenerate Levi form at boundary point: {0}")]
    DegenerateLevi(String),

    #[error("singular linear map")]
    Singular,

    #[error("series did not converge: last increment {increment:e} vs partial sum {partial:e}")]
    NotConverged { partial: f64, increment: f64 },

    #[error("metric vanishes in a sampled direction; indicatrix is unbounded")]
    UnboundedIndicatrix,

    /// No oracle is available for the requested combination.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A hypothesis of a bound or theorem is not met.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// True for errors that describe a missing capability or an unmet
    /// hypothesis rather than a bug or a bad input.
    pub fn is_capability(&self) -> bool {
        matches!(self, Error::Unsupported(_) | Error::Hypothesis(_))
    }
}
