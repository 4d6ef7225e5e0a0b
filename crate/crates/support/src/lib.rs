//! The fixed support curve Σ on which the evolving curve's endpoints slide:
//! circles, ellipses, dense convex tables and straight lines.
//!
//! Besides evaluation and projection this crate builds the short boundary
//! arc σ between the two endpoints and the oriented area A(γ + σ), and it owns
//! the boundary corrector that enforces perpendicular contact.

mod anchored;
mod arc;
mod error;
pub mod io;
pub mod spline;
mod support;

pub use anchored::{contact_report, enforce_contact, AnchoredCurve, ContactReport};
pub use arc::{closing_curve, enclosed_area, BoundaryArc};
pub use error::SupportError;
pub use io::{parse_support, SupportDocument};
pub use support::{
    SupportCurve, SupportKind, SupportSample, Table, ANGLE_TOLERANCE, ANTIPODAL_TOLERANCE,
    CONTACT_TOLERANCE_FACTOR, TABLE_MIN_SAMPLES,
};
