//! Executable versions of the singularity results: the finite-time criteria
//! for convex and straight-line supports, the singular-time fit and the
//! κ²(T − t) rate floor, type I/II classification, Hamilton's blow-up
//! rescaling with a grim-reaper comparison, and the L² blow-up rate.
//!
//! Every analysis is a pure function of a stored trajectory.

mod criterion;
mod error;
mod grim;
mod hamilton;
mod rate;
mod report;

pub use criterion::{
    check_criterion, check_line_criterion, evaluate_line_conditions, CriterionCase, CriterionVerdict,
    LineCriterionVerdict,
};
pub use error::SingularityError;
pub use grim::{grim_reaper, grim_reaper_fit, half_grim_reaper, ContactLine, GrimFit, RescaledCurve, Side, WINDOW_CURVATURE};
pub use hamilton::{hamilton_blowup, HamiltonStage, RescaledFrame};
pub use rate::{
    classify_rate_series, classify_type, estimate_from_series, estimate_singular_time, l2_rate_check,
    l2_rate_check_series, rate_floor, rate_series, resolved_tail, L2RateCheck, SingularTimeEstimate, TailConfig,
    TypeVerdict, L2_SLOPE_LIMIT,
};
pub use report::{analyze, analyze_trajectory, Analysis, FrameSummary, SingularityReport};
