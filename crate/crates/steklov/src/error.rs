use num_complex::Complex64;

/// Errors produced by the meshing, assembly, reduction and eigensolver stages.
#[derive(Debug, thiserror::Error)]
pub enum SteklovError {
    #[error("refinement level {0} exceeds the cap of {max}", max = crate::mesh::MAX_LEVEL)]
    LevelTooLarge(u32),

    #[error("triangle {0} has non-positive signed area")]
    DegenerateTriangle(usize),

    #[error("refraction index violates Re n > 0, Im n >= 0 at quadrature point ({0}, {1})")]
    InvalidRefraction(f64, f64),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("k^2 is at or near a discrete Neumann eigenvalue (rcond estimate {0:.3e})")]
    NearNeumannEigenvalue(f64),

    #[error("sparse factorization failed: {0}")]
    FactorizationFailed(String),

    #[error("linear solve failed on the contour at z = {z}")]
    SolveFailedOnContour { z: Complex64 },

    #[error("recursive search exceeded maximum depth {0}")]
    MaxDepthExceeded(u32),

    #[error("lambda region contains or touches the origin; -1/lambda is unbounded there")]
    RegionContainsOrigin,

    #[error("inverse iteration did not converge: best value {best}, residual {residual:.3e}")]
    NoConvergence { best: Complex64, residual: f64 },

    #[error("|J_m| = {0:.3e} below threshold; eigenvalue formula has a pole here")]
    DenominatorNearZero(f64),

    #[error("argument {0} outside the supported range {1}")]
    ArgumentOutOfRange(f64, f64),

    #[error("convergence fit needs at least {needed} levels, got {got}")]
    InsufficientLevels { needed: usize, got: usize },

    #[error("projection vector must be nonzero")]
    ZeroVector,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("serialization failed: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, SteklovError>;
