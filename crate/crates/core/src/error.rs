use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid dissipator coefficients: A = {a}, B = {b} (need A >= B >= 0)")]
    InvalidCoefficients { a: f64, b: f64 },

    #[error(
        "degenerate QFI at the Bloch-sphere surface: 1 - |w|^2 = {defect:e}, radial derivative {radial:e}"
    )]
    DegenerateBoundary { defect: f64, radial: f64 },

    #[error("non-finite value: {0}")]
    NonFinite(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
