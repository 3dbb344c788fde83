use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A matrix is structurally unusable (empty, non-square, non-finite entries).
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    /// A matrix required to be positive semi-definite is not, up to the
    /// stated tolerance.
    #[error("matrix is not positive semi-definite (min eigenvalue {min_eigenvalue:.6e}, allowed {allowed:.6e})")]
    NotPsd { min_eigenvalue: f64, allowed: f64 },

    /// Two operands have incompatible shapes.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A claimed factorization M = FFᵀ does not reconstruct M.
    #[error("factorization mismatch: max reconstruction residual {residual:.6e} exceeds {allowed:.6e}")]
    FactorizationMismatch { residual: f64, allowed: f64 },

    /// A point lies outside the factor's domain.
    #[error("point {value} outside domain {domain}")]
    DomainError { value: f64, domain: String },

    /// A weight parameter α must lie in (0, 1].
    #[error("alpha {0} outside (0, 1]")]
    AlphaOutOfRange(f64),

    /// The operation is not defined for this factor family.
    #[error("unsupported factor: {0}")]
    UnsupportedFactor(String),

    /// The operation requires structure (h, f, g, α) the factor does not carry.
    #[error("not applicable: {0}")]
    NotApplicable(String),

    /// Moment matrix of an inner-product specification is not positive definite.
    #[error("moment matrix is singular or not positive definite")]
    SingularMomentMatrix,

    /// Sampling requested on a domain without finite bounds.
    #[error("domain {0} is unbounded; cannot sample uniformly")]
    UnboundedDomain(String),

    /// A scalar parameter violates its contract.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
