use apcsf_flow::FlowError;
use apcsf_geometry::GeometryError;
use apcsf_line::LineError;
use apcsf_support::SupportError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SingularityError {
    #[error("κ_max grew only {growth:.2}× (need at least 10×)")]
    InsufficientBlowup { growth: f64 },
    #[error("insufficient resolution: {0}")]
    InsufficientResolution(String),
    #[error("rescaled curve has max |κ| = {kappa_max:.4}, expected 1")]
    NotNormalized { kappa_max: f64 },
    #[error("this check needs a closed convex support")]
    NeedsClosedSupport,
    #[error("this check needs a straight-line support")]
    NeedsLineSupport,
    #[error(transparent)]
    Line(#[from] LineError),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Support(#[from] SupportError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}
