use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid norm: {0}")]
    InvalidNorm(String),
    #[error("degenerate polyhedral ball: {0}")]
    DegenerateBall(String),
    #[error("zero vector where a direction is required")]
    ZeroVector,
    #[error("degenerate basis: {0}")]
    DegenerateBasis(String),
    #[error("coincident points")]
    CoincidentPoints,
    #[error("all lines are parallel and coincide")]
    AllParallel,
    #[error("not in general position: {0}")]
    NotGeneralPosition(String),
    #[error("general position violated: {0}")]
    GeneralPositionViolated(String),
    #[error("invalid ratio {m}:{n}")]
    InvalidRatio { m: f64, n: f64 },
    #[error("invalid face index set: {0}")]
    InvalidFace(String),
    #[error("point is not a circumcenter (residual {residual:e})")]
    NotCircumcenter { residual: f64 },
    #[error("no circumcenter located at tolerance (best residual {residual:e})")]
    CircumcenterNotFound { residual: f64 },
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid tolerances: {0}")]
    InvalidTolerances(String),
    #[error("grid too large: {cells} cells exceeds cap {cap}")]
    GridTooLarge { cells: u128, cap: u128 },
}

pub type Result<T, E = GeomError> = std::result::Result<T, E>;
