use apcsf_geometry::Vec2;
use apcsf_support::AnchoredCurve;
use serde::{Deserialize, Serialize};

use crate::discrete::{discretize, Discretization};
use crate::extrapolate::fit_singular_time;
use crate::step::{resample_anchored, stable_dt, step_with_dt, FlowState};
use crate::{FlowConfig, FlowError};

/// Per-step diagnostics. `kappa_sq_integral` is ∫κ² ds, used by the L² rate check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonitorRecord {
    pub time: f64,
    #[serde(rename = "L")]
    pub length: f64,
    #[serde(rename = "A")]
    pub area: f64,
    pub kappa_bar: f64,
    pub total_curvature: f64,
    pub kappa_max: f64,
    pub kappa_min: f64,
    pub kappa_a: f64,
    pub kappa_b: f64,
    pub dt: f64,
    #[serde(default)]
    pub kappa_sq_integral: f64,
}

impl MonitorRecord {
    pub fn measure(state: &FlowState) -> Result<Self, FlowError> {
        let d = discretize(&state.anchored)?;
        Self::from_parts(state, &d)
    }

    pub(crate) fn from_parts(state: &FlowState, d: &Discretization) -> Result<Self, FlowError> {
        Ok(MonitorRecord {
            time: state.time,
            length: d.length,
            area: state.anchored.enclosed_area()?,
            kappa_bar: d.kappa_bar,
            total_curvature: d.total_curvature,
            kappa_max: d.kappa_max(),
            kappa_min: d.kappa_min(),
            kappa_a: d.curvature[0],
            kappa_b: *d.curvature.last().unwrap(),
            dt: state.dt_last,
            kappa_sq_integral: d.kappa_sq_integral(),
        })
    }
}

/// A stored curve.
#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub step: usize,
    pub time: f64,
    pub kappa_max: f64,
    pub nodes: Vec<Vec2>,
    /// Σ-parameters of the endpoints.
    pub endpoint_params: [f64; 2],
    /// Number of crossing pairs of non-adjacent edges (recorded, never asserted).
    pub self_intersections: usize,
}

#[derive(Clone, Debug, Default)]
pub struct Trajectory {
    pub monitors: Vec<MonitorRecord>,
    pub snapshots: Vec<Snapshot>,
}

impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.monitors.iter().map(|m| m.time).collect()
    }

    pub fn kappa_max(&self) -> Vec<f64> {
        self.monitors.iter().map(|m| m.kappa_max).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    ReachedTEnd,
    /// κ_max reached `kappa_stop`; `t_est` is the extrapolated singular time
    /// (the stop time if no fit was possible).
    CurvatureBlowup { t_est: f64, t_stop: f64 },
    /// The step could not be taken; `t_est` is extrapolated when the data allows.
    StepFailure { t_est: Option<f64>, t_stop: f64, reason: String },
}

#[derive(Clone, Debug)]
pub struct Run {
    pub trajectory: Trajectory,
    pub outcome: Outcome,
    pub final_state: FlowState,
    pub kappa_stop: f64,
}

/// Counts crossings between non-adjacent edges of a polyline.
pub fn count_self_intersections(p: &[Vec2]) -> usize {
    let n = p.len();
    let mut count = 0;
    for i in 0..n.saturating_sub(1) {
        for j in i + 2..n - 1 {
            if segments_cross(p[i], p[i + 1], p[j], p[j + 1]) {
                count += 1;
            }
        }
    }
    count
}

fn segments_cross(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> bool {
    let d1 = (b - a).cross(c - a);
    let d2 = (b - a).cross(d - a);
    let d3 = (d - c).cross(a - c);
    let d4 = (d - c).cross(b - c);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

fn snapshot(state: &FlowState, kappa_max: f64) -> Snapshot {
    let nodes = state.anchored.curve().nodes().to_vec();
    Snapshot {
        step: state.step_index,
        time: state.time,
        kappa_max,
        self_intersections: count_self_intersections(&nodes),
        nodes,
        endpoint_params: state.anchored.endpoint_params(),
    }
}

fn extrapolated(monitors: &[MonitorRecord]) -> Option<f64> {
    let t: Vec<f64> = monitors.iter().map(|m| m.time).collect();
    let k: Vec<f64> = monitors.iter().map(|m| m.kappa_max).collect();
    fit_singular_time(&t, &k).map(|f| f.t_est)
}

/// Integrates from `initial` (resampled to `config.node_count` nodes) until
/// `t_end`, until κ_max ≥ kappa_stop, or until a step fails.
pub fn run(initial: &AnchoredCurve, config: &FlowConfig) -> Result<Run, FlowError> {
    config.validate()?;
    if config.require_short {
        let width = initial.support().width_or_infinity();
        let length = initial.curve().length();
        if !(length < width) {
            return Err(FlowError::TooLong { length, width });
        }
    }
    let start = if initial.curve().len() == config.node_count {
        initial.clone()
    } else {
        resample_anchored(initial, config.node_count, config.redistribution_weight)?
    };
    let mut state = FlowState::new(start);
    let mut d = discretize(&state.anchored)?;
    let mut traj = Trajectory::default();
    traj.monitors.push(MonitorRecord::from_parts(&state, &d)?);
    traj.snapshots.push(snapshot(&state, d.kappa_max()));
    let kappa_stop = config.kappa_stop_for(d.length, d.kappa_max());
    let mut last_snap_kappa = d.kappa_max();
    let mut marks: Vec<f64> = config.snapshot_times.iter().copied().filter(|t| *t > 0.0 && *t < config.t_end).collect();
    marks.sort_by(f64::total_cmp);
    let mut next_mark = 0;
    let t_tol = 1e-12 * config.t_end.max(1.0);

    let outcome = loop {
        if state.time >= config.t_end - t_tol {
            break Outcome::ReachedTEnd;
        }
        if d.kappa_max() >= kappa_stop {
            let t_est = extrapolated(&traj.monitors).unwrap_or(state.time);
            break Outcome::CurvatureBlowup { t_est, t_stop: state.time };
        }
        let fail = |state: &FlowState, traj: &Trajectory, reason: String| Outcome::StepFailure {
            t_est: extrapolated(&traj.monitors),
            t_stop: state.time,
            reason,
        };
        if state.step_index >= config.max_steps {
            break fail(&state, &traj, format!("step limit {} reached", config.max_steps));
        }
        let rule = stable_dt(&d, config);
        if rule < config.dt_min {
            let e = FlowError::StepRejected { dt: rule, dt_min: config.dt_min, time: state.time };
            break fail(&state, &traj, e.to_string());
        }
        let mut dt = rule.min(config.dt_initial);
        let mut hit_mark = false;
        let horizon = marks.get(next_mark).copied().unwrap_or(config.t_end);
        if state.time + dt >= horizon - t_tol {
            dt = horizon - state.time;
            hit_mark = next_mark < marks.len();
        }
        let next = match step_with_dt(&state, &d, dt, config) {
            Ok(s) => s,
            Err(e) => break fail(&state, &traj, e.to_string()),
        };
        let nd = match discretize(&next.anchored) {
            Ok(nd) => nd,
            Err(e) => break fail(&state, &traj, e.to_string()),
        };
        let record = match MonitorRecord::from_parts(&next, &nd) {
            Ok(r) => r,
            Err(e) => break fail(&state, &traj, e.to_string()),
        };
        state = next;
        d = nd;
        traj.monitors.push(record);
        if hit_mark {
            next_mark += 1;
        }
        let k = d.kappa_max();
        if hit_mark || k >= config.snapshot_growth * last_snap_kappa {
            traj.snapshots.push(snapshot(&state, k));
            last_snap_kappa = last_snap_kappa.max(k);
        }
    };
    if traj.snapshots.last().map(|s| s.step) != Some(state.step_index) {
        traj.snapshots.push(snapshot(&state, d.kappa_max()));
    }
    Ok(Run { trajectory: traj, outcome, final_state: state, kappa_stop })
}
