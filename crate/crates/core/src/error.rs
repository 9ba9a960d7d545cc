use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("state not positive semidefinite (eigenvalue {0:.3e})")]
    NotPositive(f64),
    #[error("trace {0} differs from 1")]
    BadTrace(f64),
    #[error("vector not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("operator not unitary (deviation {0:.3e})")]
    NotUnitary(f64),
    #[error("bad probabilities: {0}")]
    BadProbabilities(String),
    #[error("channel not column-symmetric (p[m][n] varies with n by {0:.3e})")]
    NotColumnSymmetric(f64),
    #[error("non-finite value encountered")]
    NonFinite,
    #[error("eigenvector residual {0:.3e} above tolerance")]
    Residual(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
