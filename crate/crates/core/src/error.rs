use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Shapes that do not fit the declared local dimension.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A parameter outside the range where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("operator is not Hermitian: max |M - M^dagger| = {asymmetry:e}")]
    NotHermitian { asymmetry: f64 },

    #[error("state is not antisymmetric: |V phi + phi| = {residual:e}")]
    NotAntisymmetric { residual: f64 },

    /// A result that is mathematically impossible, signalling a badly chosen tolerance.
    #[error("tolerance failure: {0}")]
    Tolerance(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
