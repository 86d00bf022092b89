use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix order must be at least 1")]
    EmptyMatrix,

    #[error("expected {expected} entries for a square matrix, got {actual}")]
    ShapeMismatch { expected: usize, actual: usize },

    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not symmetric: max asymmetry {asymmetry:e} exceeds {tolerance:e}")]
    NonSymmetric { asymmetry: f64, tolerance: f64 },

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal mass {off_diagonal:e})")]
    NoConvergence { sweeps: usize, off_diagonal: f64 },

    #[error("permutation is not a bijection on 0..{order}")]
    NotBijection { order: usize },

    #[error("order {order} is too small: at least {minimum} required")]
    OrderTooSmall { order: usize, minimum: usize },

    #[error("order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("invalid agent configuration: {0}")]
    InvalidConfiguration(String),

    #[error("agents {first} and {second} are coincident")]
    CoincidentAgents { first: String, second: String },

    #[error("unknown agent id {0:?}")]
    UnknownAgent(String),

    #[error("index {index} out of range for order {order}")]
    IndexOutOfRange { index: usize, order: usize },

    #[error("matrix is not a valid Laplacian: {0}")]
    NotLaplacian(String),

    #[error("second eigenvalue is degenerate (spectral gap {gap:e})")]
    DegenerateFiedler { gap: f64 },

    #[error("Laplacian variation is invalid: {0}")]
    InvalidVariation(String),

    #[error("transform is not orthonormal with Q·1 = 1: {0}")]
    InvalidTransform(String),

    #[error("full enumeration of order {order} exceeds the cap of {cap}; use sampling")]
    OrderTooLarge { order: usize, cap: usize },

    #[error("parameters must be positive and finite (alpha = {alpha}, beta = {beta})")]
    NonPositiveParameter { alpha: f64, beta: f64 },

    #[error("closed-form discriminant is negative ({0:e})")]
    NegativeDiscriminant(f64),

    #[error("sampling grid is empty")]
    EmptyGrid,
}

impl Error {
    /// Stable machine-readable identifier used in error JSON.
    pub fn code(&self) -> &'static str {
        match self {
            Error::EmptyMatrix => "EmptyMatrix",
            Error::ShapeMismatch { .. } => "ShapeMismatch",
            Error::NonFinite { .. } => "NonFinite",
            Error::NonSymmetric { .. } => "NonSymmetric",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::NotBijection { .. } => "NotBijection",
            Error::OrderTooSmall { .. } => "OrderTooSmall",
            Error::OrderMismatch { .. } => "OrderMismatch",
            Error::InvalidConfiguration(_) => "InvalidConfiguration",
            Error::CoincidentAgents { .. } => "CoincidentAgents",
            Error::UnknownAgent(_) => "UnknownAgent",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::NotLaplacian(_) => "NotLaplacian",
            Error::DegenerateFiedler { .. } => "DegenerateFiedler",
            Error::InvalidVariation(_) => "InvalidVariation",
            Error::InvalidTransform(_) => "InvalidTransform",
            Error::OrderTooLarge { .. } => "OrderTooLarge",
            Error::NonPositiveParameter { .. } => "NonPositiveParameter",
            Error::NegativeDiscriminant(_) => "NegativeDiscriminant",
            Error::EmptyGrid => "EmptyGrid",
        }
    }
}
