use std::io::Write;

use apcsf_flow::{
    closed_discretize, closed_stable_dt, closed_step, redistribute_closed, ClosedDiscretization, FlowConfig,
    FlowError, Outcome, Redistribution,
};
use apcsf_geometry::{signed_area_of, turning_number, ClosedCurve, Vec2};
use serde::Serialize;

use crate::reflect::{resymmetrize, upper_half};
use crate::{LineError, ReflectedCurve};

/// Largest node movement re-symmetrization may apply after a step.
pub const SYMMETRY_DRIFT_TOLERANCE: f64 = 1e-8;

/// Monitors of the doubled curve δ. `kappa_a`/`kappa_b` are the curvatures at
/// the two axis nodes (the endpoints of the half curve); `index` is the
/// turning number of δ.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReflectedRecord {
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
    pub kappa_sq_integral: f64,
    pub index: i64,
    /// Movement applied by the re-symmetrization after this step.
    pub symmetry_drift: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReflectedSnapshot {
    pub step: usize,
    pub time: f64,
    pub kappa_max: f64,
    pub nodes: Vec<Vec2>,
}

#[derive(Clone, Debug)]
pub struct ReflectedRun {
    pub monitors: Vec<ReflectedRecord>,
    pub snapshots: Vec<ReflectedSnapshot>,
    pub outcome: Outcome,
    pub final_curve: ReflectedCurve,
}

impl ReflectedRun {
    /// Half curve (from `a` to `b`) of a stored snapshot.
    pub fn upper_half(&self, snapshot: &ReflectedSnapshot) -> Vec<Vec2> {
        upper_half(&snapshot.nodes, self.final_curve.reoriented())
    }

    /// The snapshot stored at time `t` (within 1e−12), if any.
    pub fn snapshot_at(&self, t: f64) -> Option<&ReflectedSnapshot> {
        self.snapshots.iter().find(|s| (s.time - t).abs() <= 1e-12 * t.abs().max(1.0))
    }
}

fn record(p: &[Vec2], d: &ClosedDiscretization, time: f64, dt: f64, index: i64, drift: f64) -> ReflectedRecord {
    let half = p.len() / 2;
    ReflectedRecord {
        time,
        length: d.length,
        area: signed_area_of(p),
        kappa_bar: d.kappa_bar,
        total_curvature: d.total_curvature,
        kappa_max: d.kappa_max(),
        kappa_min: d.curvature.iter().copied().fold(f64::INFINITY, f64::min),
        kappa_a: d.curvature[0],
        kappa_b: d.curvature[half],
        dt,
        kappa_sq_integral: d.kappa_sq_integral(),
        index,
        symmetry_drift: drift,
    }
}

/// Runs the closed-curve flow `∂δ/∂t = (κ − 2πm/L)ν` on the double, with the
/// node count of `initial` (resample the half curve before reflecting to pick
/// a resolution). Step-size rule, stopping rules and snapshot cadence are those
/// of the free-boundary engine. After every step the nodes are averaged with
/// their mirror partners; a correction above [`SYMMETRY_DRIFT_TOLERANCE`] is an
/// error.
pub fn run_reflected(initial: &ReflectedCurve, config: &FlowConfig) -> Result<ReflectedRun, LineError> {
    config.validate()?;
    let line = initial.line().clone();
    let mut p = initial.closed().nodes().to_vec();
    let mut d = closed_discretize(&p)?;
    let index = initial.index();
    let mut monitors = vec![record(&p, &d, 0.0, 0.0, index, initial.symmetry_defect())];
    let snap = |p: &[Vec2], step, time, k| ReflectedSnapshot { step, time, kappa_max: k, nodes: p.to_vec() };
    let mut snapshots = vec![snap(&p, 0, 0.0, d.kappa_max())];
    let kappa_stop = config.kappa_stop_for(d.length / 2.0, d.kappa_max());
    let mut last_snap_kappa = d.kappa_max();
    let mut marks: Vec<f64> = config.snapshot_times.iter().copied().filter(|t| *t > 0.0 && *t < config.t_end).collect();
    marks.sort_by(f64::total_cmp);
    let mut next_mark = 0;
    let t_tol = 1e-12 * config.t_end.max(1.0);
    let mut time = 0.0;
    let mut step_index = 0usize;

    let outcome = loop {
        if time >= config.t_end - t_tol {
            break Outcome::ReachedTEnd;
        }
        let t_est = || {
            let t: Vec<f64> = monitors.iter().map(|m| m.time).collect();
            let k: Vec<f64> = monitors.iter().map(|m| m.kappa_max).collect();
            apcsf_flow::fit_singular_time(&t, &k).map(|f| f.t_est)
        };
        if d.kappa_max() >= kappa_stop {
            break Outcome::CurvatureBlowup { t_est: t_est().unwrap_or(time), t_stop: time };
        }
        if step_index >= config.max_steps {
            break Outcome::StepFailure { t_est: t_est(), t_stop: time, reason: format!("step limit {} reached", config.max_steps) };
        }
        let rule = closed_stable_dt(&d, config);
        if rule < config.dt_min {
            let e = FlowError::StepRejected { dt: rule, dt_min: config.dt_min, time };
            break Outcome::StepFailure { t_est: t_est(), t_stop: time, reason: e.to_string() };
        }
        let mut dt = rule.min(config.dt_initial);
        let mut hit_mark = false;
        let horizon = marks.get(next_mark).copied().unwrap_or(config.t_end);
        if time + dt >= horizon - t_tol {
            dt = horizon - time;
            hit_mark = next_mark < marks.len();
        }
        let mut next = closed_step(&p, &d, dt, config.scheme)?;
        step_index += 1;
        if let Redistribution::EveryKSteps(k) = config.redistribution {
            if k > 0 && step_index % k == 0 {
                next = redistribute_closed(&next, config.redistribution_weight)?;
            }
        }
        let drift = resymmetrize(&mut next, &line);
        if !(drift <= SYMMETRY_DRIFT_TOLERANCE) {
            return Err(LineError::Asymmetric { deviation: drift });
        }
        p = next;
        d = closed_discretize(&p)?;
        time += dt;
        let m = turning_number(&ClosedCurve::smooth(p.clone())?)?;
        monitors.push(record(&p, &d, time, dt, m, drift));
        if hit_mark {
            next_mark += 1;
        }
        let k = d.kappa_max();
        if hit_mark || k >= config.snapshot_growth * last_snap_kappa {
            snapshots.push(snap(&p, step_index, time, k));
            last_snap_kappa = last_snap_kappa.max(k);
        }
    };
    if snapshots.last().map(|s| s.step) != Some(step_index) {
        snapshots.push(snap(&p, step_index, time, d.kappa_max()));
    }
    let final_curve = ReflectedCurve::from_double(p, line)?;
    Ok(ReflectedRun { monitors, snapshots, outcome, final_curve })
}

/// Writes reflected monitors as CSV: the free-boundary columns followed by
/// `index` and `symmetry_drift`.
pub fn write_reflected_monitors<W: Write>(writer: W, records: &[ReflectedRecord]) -> Result<(), LineError> {
    let err = |e: csv::Error| LineError::Flow(FlowError::Monitors(e.to_string()));
    let mut w = csv::Writer::from_writer(writer);
    for r in records {
        w.serialize(r).map_err(err)?;
    }
    w.flush().map_err(|e| LineError::Flow(FlowError::Monitors(e.to_string())))
}
