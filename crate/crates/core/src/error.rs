use crate::arith::ArithError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("determinant is not a monomial: {0}")]
    NotMonomialDet(String),
    #[error("determinant is not a nonzero constant: {0}")]
    NonConstantDet(String),
    #[error("matrix has {0} powers where none are allowed")]
    WrongSupport(&'static str),
    #[error("factorisation failed verification: {0}")]
    VerificationFailed(String),
    #[error("normalisation unavailable: {0}")]
    NormalisationUnavailable(String),
    #[error("indices ({0}, {1}) are not a stable pair")]
    UnstableIndices(i64, i64),
    #[error("inadmissible bound parameters: {0}")]
    Inadmissible(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("reduction failed: {0}")]
    Reduction(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
