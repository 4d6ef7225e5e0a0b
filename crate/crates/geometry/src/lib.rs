//! Discrete differential geometry of plane polylines.
//!
//! Curves are stored as ordered node lists. [`OpenCurve`] models an evolving
//! arc with two free endpoints, [`ClosedCurve`] a closed polygon with optional
//! declared corners. All operations are pure functions of their inputs.

mod curve;
mod distance;
mod error;
mod frames;
pub mod io;
mod vec2;

pub use curve::{
    edge_lengths, signed_area_of, ClosedCurve, Corner, OpenCurve, EPSILON_REGULAR_FACTOR,
};
pub use distance::{distance_to_polyline, hausdorff_distance};
pub use error::GeometryError;
pub use frames::{
    endpoint_tangents, frames, is_convex, menger_curvature, node_curvatures, parabola_endpoint,
    signed_angle, total_curvature, total_curvature_with_tangents, turning_number,
    turning_number_raw, FrameSample, ParabolaEnd,
};
pub use io::{parse_curve, CurveDocument, CurveKind};
pub use vec2::Vec2;

/// Sum of chord lengths of an open curve.
pub fn length(curve: &OpenCurve) -> f64 {
    curve.length()
}

/// Oriented shoelace area of a closed curve; positive for counterclockwise curves.
pub fn signed_area(curve: &ClosedCurve) -> f64 {
    signed_area_of(curve.nodes())
}
