use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TrkError {
    #[error("invalid quadrature order: {0}")]
    QuadratureOrder(String),
    #[error("vector is not a unit direction (|v| = {0})")]
    NotUnit(f64),
    #[error("zero vector has no direction")]
    ZeroVector,
    #[error("Bessel function argument must be non-negative, got {0}")]
    NegativeArgument(f64),
    #[error("antipodal phase undefined at the poles")]
    PoleDegenerate,
    #[error("wave vector must be nonzero")]
    ZeroWaveVector,
    #[error("eigenvalue must be nonzero")]
    ZeroEigenvalue,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("mode field violates its support condition: {0}")]
    SupportCondition(String),
    #[error("Helmholtz precondition failed: residual {residual:e} exceeds {tol:e}")]
    NotHelmholtz { residual: f64, tol: f64 },
    #[error("p-grid is not uniform")]
    NonUniformGrid,
    #[error("p-grid size {0} is not a power of two")]
    GridSize(usize),
    #[error("profile has DC content {0:e} in direction {1}; the Riesz kernel needs zero-mean profiles")]
    DcContent(f64, usize),
    #[error("matrix is not orthogonal (deviation {0:e})")]
    NotOrthogonal(f64),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("point lies outside the integration domain")]
    OutsideDomain,
    #[error("frequency {0} exceeds the Nyquist limit {1}")]
    AboveNyquist(f64, f64),
    #[error("unknown field `{0}`")]
    UnknownField(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
}

pub type Result<T> = std::result::Result<T, TrkError>;
