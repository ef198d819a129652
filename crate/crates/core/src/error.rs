use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("range error: {0}")]
    Range(String),

    #[error("degenerate frequency node: xi = {xi}, k_z = {kz}")]
    DegenerateNode { xi: f64, kz: f64 },

    #[error("unsupported permittivity model: {0}")]
    UnsupportedModel(String),

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid quadrature: {0}")]
    InvalidQuadrature(String),

    /// det(I - A) <= 0 at a node: an eigenvalue of the kernel reached 1.
    #[error("spectral violation at xi = {xi}, k_z = {kz}: det(I - A) = {det}")]
    SpectralViolation { xi: f64, kz: f64, det: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),
}
