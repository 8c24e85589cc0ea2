use num_bigint::BigInt;
use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("zero polynomial not allowed here")]
    ZeroPolynomial,
    #[error("degree-{0} polynomial not allowed here")]
    BadDegree(usize),
    #[error("valuation of zero is infinite")]
    ZeroValuation,
    #[error("factoring inconclusive: unfactored cofactor {cofactor}")]
    FactoringInconclusive { cofactor: BigInt },
    #[error("modulus divides leading coefficient: model changes at infinity")]
    LeadingCoefficientVanishes,
    #[error("prime {p} is ramified or bad for this polynomial: {reason}")]
    BadPrime { p: u64, reason: String },
    #[error("duplicate curve label: {0}")]
    DuplicateLabel(String),
    #[error("polynomial has zero discriminant (not separable)")]
    ZeroDiscriminant,
    #[error("curve polynomial must have even degree >= 6, got {0}")]
    BadCurveDegree(usize),
    #[error("family discriminant has a repeated root (d = 0); construction unsupported")]
    DegenerateFamily,
    #[error("interpolation produced a non-integral coefficient: degree bound violated")]
    NonIntegralInterpolation,
    #[error("search bounds exhausted: {0}")]
    Inconclusive(String),
    #[error("matrix is not invertible mod {0}")]
    SingularMatrix(u64),
    #[error("matrix is not in the embedded symmetric-group image")]
    NotInEmbeddedImage,
    #[error("unsupported parameters: {0}")]
    Unsupported(String),
    #[error("enumeration budget exceeded (cap {0})")]
    BudgetExceeded(u64),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
