use apcsf_geometry::GeometryError;
use apcsf_support::SupportError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlowError {
    #[error("time step {dt:.3e} fell below dt_min = {dt_min:.1e} at t = {time}")]
    StepRejected { dt: f64, dt_min: f64, time: f64 },
    #[error("boundary corrector left a contact angle of {angle:.3e} rad")]
    BoundaryEnforcementFailed { angle: f64 },
    #[error("initial length {length} is not below the minimum width {width} of the support")]
    TooLong { length: f64, width: f64 },
    #[error("invalid flow configuration: {0}")]
    InvalidConfig(String),
    #[error("linear solve failed (singular system)")]
    SingularSystem,
    #[error("monitor file: {0}")]
    Monitors(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Support(#[from] SupportError),
}
