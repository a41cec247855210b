use crate::rational::Rational;

/// Errors raised by the landscape library.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("rational arithmetic overflow")]
    Overflow,
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid rational literal `{0}`")]
    InvalidLiteral(String),
    #[error("point ({birth}, {death}) is not above the diagonal: birth must be < death")]
    NotAboveDiagonal { birth: Rational, death: Rational },
    #[error("weight {0} is not positive")]
    NonPositiveWeight(Rational),
    #[error("level a = {0} must be positive")]
    NonPositiveLevel(Rational),
    #[error("height h = {0} must be non-negative")]
    NegativeHeight(Rational),
    #[error("scale factor {0} must be positive")]
    NonPositiveScale(Rational),
    #[error("the mean of an empty list of measures is undefined")]
    EmptyMean,
    #[error("expected integer weights, found {0}")]
    NonIntegerWeight(Rational),
    #[error("supports of the positive and negative parts intersect at ({birth}, {death})")]
    OverlappingSupports { birth: Rational, death: Rational },
    #[error("invalid rectangle: {0}")]
    InvalidRect(String),
    #[error("malformed profile: {0}")]
    MalformedProfile(String),
    #[error("malformed landscape: {0}")]
    MalformedLandscape(String),
    #[error("landscape failed validation: {0}")]
    ValidationFailed(String),
    #[error("reconstruction check failed: {0}")]
    VerificationFailed(String),
    #[error("brute-force oracle size bound exceeded: {units} unit atoms on one side (max {max})")]
    SizeBound { units: usize, max: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("empty evaluation grid")]
    EmptyGrid,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
