use thiserror::Error;

/// Errors produced by model loading, cone tests and polygon construction.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("dimension mismatch: class has {found} coefficients, model rank is {rank}")]
    DimensionMismatch { found: usize, rank: usize },

    #[error("unknown curve `{0}`")]
    UnknownCurve(String),

    #[error("unknown flag `{0}`")]
    UnknownFlag(String),

    #[error("divisor is not pseudo-effective")]
    NotPseudoeffective,

    #[error("divisor is not big")]
    NotBig,

    /// The iterative decomposition reached a fixed point whose positive part
    /// still pairs negatively with an effective generator, or an intermediate
    /// support Gram matrix failed to be negative definite. The model is
    /// missing a negative curve; this is an honest failure, not a wrong answer.
    #[error("curve catalog insufficient: {0}")]
    CatalogInsufficient(String),

    #[error("slice parameter {t} outside polygon domain [{lo}, {hi}]")]
    SliceOutOfDomain { t: String, lo: String, hi: String },

    #[error("no nef generator pairs positively with `{0}`; the model is degenerate")]
    UnboundedThreshold(String),

    #[error("flag `{0}` does not map to a torus-invariant flag of this fan")]
    FlagNotToric(String),

    #[error("no level p <= {0} makes pD - A big")]
    NoBigLevel(usize),

    #[error("operation on an empty polygon")]
    EmptyPolygon,
}

pub type Result<T> = std::result::Result<T, Error>;
