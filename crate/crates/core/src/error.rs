use std::fmt;

/// Denominators that vanish on the singular parameter loci.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Locus {
    /// `q - 1/p = 0`, the two-parameter bracket denominator.
    PqOne,
    /// `q - 1/q = 0`.
    QSquaredOne,
    /// `p - 1/p = 0`.
    PSquaredOne,
    /// `base - 1/base = 0` for a standalone one-parameter bracket.
    BaseSquaredOne,
}

impl fmt::Display for Locus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Locus::PqOne => "pq=1",
            Locus::QSquaredOne => "q²=1",
            Locus::PSquaredOne => "p²=1",
            Locus::BaseSquaredOne => "base²=1",
        })
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{0} singular: denominator below tolerance")]
    SingularDenominator(Locus),
    #[error("deformation parameter {0} is zero")]
    ZeroParameter(&'static str),
    #[error("complex power with zero base")]
    ZeroBase,
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
    #[error("truncation must be at least 1")]
    InvalidTruncation,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("logarithm undefined: {0}")]
    LogUndefined(String),
}

impl Error {
    /// True for errors caused by landing on a singular locus of the parameters.
    pub fn is_singular(&self) -> bool {
        matches!(
            self,
            Error::SingularDenominator(_) | Error::ZeroParameter(_) | Error::ZeroBase | Error::LogUndefined(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
