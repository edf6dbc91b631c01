use thiserror::Error;

use crate::isometry::IsometryKind;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix dimension {0} exceeds the supported maximum of {max}", max = crate::hermitian::MAX_DIM)]
    DimensionTooLarge(usize),

    #[error("eigenvalue iteration did not converge")]
    NoConvergence,

    #[error("projective point is the cusp at infinity")]
    PointAtInfinity,

    #[error("point lies outside the Siegel domain (u = {u:e})")]
    OutsideDomain { u: f64 },

    #[error("nonpositive height {0}")]
    NonpositiveHeight(f64),

    #[error("image of the point lies at infinity")]
    ImageAtInfinity,

    #[error("{} is not in U(n,1): residual {residual:.3e} exceeds {tol:.3e}", name.as_deref().unwrap_or("matrix"))]
    NotAMember {
        name: Option<String>,
        residual: f64,
        tol: f64,
    },

    #[error("element is {0}, not hyperbolic")]
    NotHyperbolic(IsometryKind),

    #[error("indeterminate classification: {first} or {second} (margin {margin:e})")]
    Indeterminate {
        first: IsometryKind,
        second: IsometryKind,
        margin: f64,
    },

    #[error("heisenberg elements based at different cusps")]
    CuspMismatch,

    #[error("element stabilizes the cusp at infinity (c = 0); bound does not apply")]
    StabilizerElement,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
