use apcsf_flow::FlowError;
use apcsf_geometry::GeometryError;
use apcsf_support::SupportError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LineError {
    #[error("the support is not a straight line")]
    NotLine,
    #[error("endpoint {end} is {distance:.3e} away from the line")]
    OffLine { end: char, distance: f64 },
    #[error("contact at endpoint {end} deviates from perpendicular by {angle:.3e} rad; the reflected curve would not be C²")]
    NotPerpendicular { end: char, angle: f64 },
    #[error("reflected curve has even index {m}")]
    EvenIndex { m: i64 },
    #[error("mirror symmetry drifted by {deviation:.3e} in one step")]
    Asymmetric { deviation: f64 },
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Support(#[from] SupportError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}
