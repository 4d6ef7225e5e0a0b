//! Straight-line supports. A curve meeting a line perpendicularly at both ends
//! doubles, by reflection, to a closed C² curve δ whose index m is odd. The
//! flow on the half plane is equivalent to the boundary-free closed flow of δ
//! with κ̄ = 2πm/L(δ), which this crate runs as an independent check of the
//! free-boundary engine.

mod error;
mod reflect;
mod run;

pub use error::LineError;
pub use reflect::{mirror, reflect, resymmetrize, symmetry_defect, ReflectedCurve};
pub use run::{run_reflected, write_reflected_monitors, ReflectedRecord, ReflectedRun, ReflectedSnapshot, SYMMETRY_DRIFT_TOLERANCE};
