use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum NctError {
    #[error("deformation parameters do not match: {0} vs {1}")]
    ThetaMismatch(String, String),
    #[error("operation requires a rational deformation parameter, got theta = {0}")]
    IrrationalTheta(f64),
    #[error("matrix size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("section is not equivariant (max coefficient deviation {0:.3e})")]
    NonEquivariant(f64),
    #[error("element is not central")]
    NonCentral,
    #[error("operator is not Hermitian within tolerance (deviation {0:.3e})")]
    NonHermitian(f64),
    #[error("evaluation point is off the unit circle: |z| = {0}")]
    OffCircle(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, NctError>;
