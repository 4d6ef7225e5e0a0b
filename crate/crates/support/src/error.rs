use apcsf_geometry::GeometryError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SupportError {
    #[error("invalid support curve: {0}")]
    InvalidSupport(String),
    #[error("operation is undefined for a straight-line support")]
    UnsupportedForLine,
    #[error("endpoints are antipodal on the support (both arcs turn by about pi)")]
    AntipodalEndpoints,
    #[error("boundary arc endpoints differ from the curve endpoints by {distance:.3e}")]
    MismatchedEndpoints { distance: f64 },
    #[error("projection onto the support diverged")]
    ProjectionDiverged,
    #[error("endpoint {end} off the support by {distance:.3e} (tolerance {tolerance:.3e})")]
    OffSupport { end: char, distance: f64, tolerance: f64 },
    #[error("contact angle at endpoint {end} deviates by {angle:.3e} rad (tolerance {tolerance:.1e})")]
    NotPerpendicular { end: char, angle: f64, tolerance: f64 },
    #[error("invalid support document: {0}")]
    InvalidDocument(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}
