use apcsf_flow::{Outcome, Run, Trajectory};
use apcsf_support::SupportCurve;
use serde::Serialize;

use crate::grim::{grim_reaper_fit, GrimFit};
use crate::hamilton::{hamilton_blowup, HamiltonStage};
use crate::rate::{
    classify_rate_series, estimate_singular_time, l2_rate_check, rate_floor, rate_series, L2RateCheck,
    SingularTimeEstimate, TailConfig, TypeVerdict,
};
use crate::SingularityError;

/// Summary of a rescaled frame for the report; the curves themselves are
/// written separately.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrameSummary {
    pub j_inverse: f64,
    pub time: f64,
    pub scale: f64,
    pub node: usize,
    pub max_abs_curvature: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingularityReport {
    #[serde(rename = "T_est")]
    pub t_est: f64,
    pub uncertainty: f64,
    pub type_verdict: TypeVerdict,
    pub rate_series: Vec<(f64, f64)>,
    /// Least value of the rate series over the resolved tail.
    pub rate_floor: f64,
    pub l2: L2RateCheck,
    pub blowup_frames: Vec<FrameSummary>,
    /// Fit of the last rescaled frame, if rescaling succeeded.
    pub grim_fit: Option<GrimFit>,
    /// Why rescaling failed, if it did.
    pub blowup_note: Option<String>,
}

pub struct Analysis {
    pub report: SingularityReport,
    pub stages: Vec<HamiltonStage>,
}

/// All singularity analyses of a finished run. The singular time is refitted
/// from the monitors even when the run extrapolated one itself.
pub fn analyze(run: &Run, config: &TailConfig) -> Result<Analysis, SingularityError> {
    if let Outcome::ReachedTEnd = run.outcome {
        let monitors = &run.trajectory.monitors;
        let growth = monitors.last().map_or(1.0, |m| m.kappa_max) / monitors[0].kappa_max;
        return Err(SingularityError::InsufficientBlowup { growth });
    }
    analyze_trajectory(&run.trajectory, run.final_state.anchored.support(), config)
}

/// The analyses of a stored trajectory on the given support.
pub fn analyze_trajectory(
    trajectory: &Trajectory,
    support: &SupportCurve,
    config: &TailConfig,
) -> Result<Analysis, SingularityError> {
    let monitors = &trajectory.monitors;
    if monitors.is_empty() {
        return Err(SingularityError::InsufficientBlowup { growth: 1.0 });
    }
    let estimate: SingularTimeEstimate = estimate_singular_time(monitors)?;
    let series = rate_series(monitors, &estimate, config);
    let type_verdict = classify_rate_series(&series, config);
    let l2 = l2_rate_check(monitors, &estimate, config);
    let (stages, blowup_note) =
        match hamilton_blowup(&trajectory.snapshots, support, estimate.t_est) {
            Ok(s) => (s, None),
            Err(e) => (Vec::new(), Some(e.to_string())),
        };
    let grim_fit = match stages.last() {
        Some(st) => Some(grim_reaper_fit(&st.frame.curve)?),
        None => None,
    };
    let blowup_frames = stages
        .iter()
        .map(|st| FrameSummary {
            j_inverse: st.j_inverse,
            time: st.frame.time,
            scale: st.scale,
            node: st.node,
            max_abs_curvature: st.frame.curve.max_abs_curvature(),
        })
        .collect();
    let report = SingularityReport {
        t_est: estimate.t_est,
        uncertainty: estimate.uncertainty,
        type_verdict,
        rate_floor: rate_floor(&series),
        rate_series: series,
        l2,
        blowup_frames,
        grim_fit,
        blowup_note,
    };
    Ok(Analysis { report, stages })
}

impl SingularityReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
