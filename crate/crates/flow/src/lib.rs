//! Time integration of the area-preserving curve shortening flow
//! `∂γ/∂t = (κ − κ̄)ν` for open curves whose endpoints slide on a support
//! curve Σ, meeting it perpendicularly from outside.
//!
//! The default scheme is semi-implicit: the curve Laplacian is implicit on the
//! frozen spacing, the scalar κ̄ explicit. The free boundary enters through
//! ghost nodes mirrored across the tangent line of Σ, and after every update a
//! local corrector puts the endpoints back on Σ with perpendicular contact.

mod closed;
mod config;
mod discrete;
mod error;
mod extrapolate;
mod mat2;
mod monitors;
mod residual;
mod run;
mod step;

pub use closed::{closed_discretize, closed_stable_dt, closed_step, redistribute_closed, ClosedDiscretization};
pub use config::{FlowConfig, Redistribution, Scheme};
pub use discrete::{discretize, velocity_field, Discretization};
pub use error::FlowError;
pub use extrapolate::{fit_singular_time, fit_window, SingularTimeFit};
pub use monitors::{monitors_to_string, parse_monitors, read_monitors, write_monitors, MONITOR_HEADER};
pub use residual::{boundary_identity_residual, endpoint_jets, EndpointJets};
pub use run::{count_self_intersections, run, MonitorRecord, Outcome, Run, Snapshot, Trajectory};
pub use step::{redistribute, resample_anchored, stable_dt, step, step_with_dt, FlowState};
