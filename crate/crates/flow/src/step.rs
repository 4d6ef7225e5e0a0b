use apcsf_geometry::{OpenCurve, Vec2};
use apcsf_support::{contact_report, enforce_contact, AnchoredCurve, ANGLE_TOLERANCE};

use crate::discrete::{discretize, Discretization};
use crate::mat2::{solve_block_tridiagonal, Mat2};
use crate::{FlowConfig, FlowError, Redistribution, Scheme};

/// The state of a free-boundary run.
#[derive(Clone, Debug)]
pub struct FlowState {
    pub anchored: AnchoredCurve,
    pub time: f64,
    pub step_index: usize,
    pub dt_last: f64,
}

impl FlowState {
    pub fn new(anchored: AnchoredCurve) -> Self {
        FlowState { anchored, time: 0.0, step_index: 0, dt_last: 0.0 }
    }
}

/// The step size the stability rule allows for this configuration (before
/// capping by `dt_initial`).
pub fn stable_dt(d: &Discretization, config: &FlowConfig) -> f64 {
    let kmax = d.kappa_max();
    match config.scheme {
        Scheme::SemiImplicit => config.dt_safety / (kmax * kmax).max(1e-300),
        Scheme::Explicit => {
            let h = d.min_spacing();
            config.dt_safety * h * h / (kmax * kmax * h * h).max(1.0)
        }
    }
}

/// One step with the rule-chosen `dt`, capped by `dt_initial` and the
/// remaining time to `t_end`.
pub fn step(state: &FlowState, config: &FlowConfig) -> Result<FlowState, FlowError> {
    let d = discretize(&state.anchored)?;
    let dt = stable_dt(&d, config);
    if dt < config.dt_min {
        return Err(FlowError::StepRejected { dt, dt_min: config.dt_min, time: state.time });
    }
    let dt = dt.min(config.dt_initial).min((config.t_end - state.time).max(config.dt_min));
    step_with_dt(state, &d, dt, config)
}

/// One step of size `dt` from a precomputed discretization of `state`.
pub fn step_with_dt(state: &FlowState, d: &Discretization, dt: f64, config: &FlowConfig) -> Result<FlowState, FlowError> {
    let anchored = &state.anchored;
    let mut nodes = match config.scheme {
        Scheme::SemiImplicit => semi_implicit_update(anchored, d, dt)?,
        Scheme::Explicit => explicit_update(anchored.curve().nodes(), d, dt),
    };
    if nodes.iter().any(|p| !p.is_finite()) {
        return Err(FlowError::StepRejected { dt, dt_min: config.dt_min, time: state.time });
    }
    let support = anchored.support();
    let mut params = enforce_contact(&mut nodes, support)?;
    let step_index = state.step_index + 1;
    if let Redistribution::EveryKSteps(k) = config.redistribution {
        if step_index % k == 0 {
            let tmp = AnchoredCurve::from_parts(OpenCurve::new(nodes)?, support.clone(), params);
            nodes = redistribute(&tmp, tmp.curve().len(), config.redistribution_weight)?;
            params = enforce_contact(&mut nodes, support)?;
        }
    }
    let curve = OpenCurve::new(nodes)?;
    let (report, _) = contact_report(&curve, support)?;
    if !(report.max_angle() <= ANGLE_TOLERANCE) {
        return Err(FlowError::BoundaryEnforcementFailed { angle: report.max_angle() });
    }
    Ok(FlowState {
        anchored: AnchoredCurve::from_parts(curve, support.clone(), params),
        time: state.time + dt,
        step_index,
        dt_last: dt,
    })
}

fn explicit_update(p: &[Vec2], d: &Discretization, dt: f64) -> Vec<Vec2> {
    p.iter()
        .zip(d.curvature.iter().zip(&d.normals))
        .map(|(x, (k, nu))| *x + *nu * ((k - d.kappa_bar) * dt))
        .collect()
}

/// Implicit curve-Laplacian `∂²γ/∂s²` (which equals κν) on the frozen spacing,
/// explicit `−κ̄ν`. The endpoint rows use the ghost node, which couples the two
/// coordinates through the reflection, hence the 2×2 block solve.
///
/// The ghost is mirrored across the tangent line of Σ at the *new* endpoint
/// position: first predicted from the explicit endpoint velocity, then taken
/// from the solution of a first solve. Reflecting at the old position freezes
/// the direction of Σ over the step, which loses the boundary coupling to κ_Σ.
fn semi_implicit_update(anchored: &AnchoredCurve, d: &Discretization, dt: f64) -> Result<Vec<Vec2>, FlowError> {
    let p = anchored.curve().nodes();
    let n = p.len();
    let support = anchored.support();
    let velocity = |i: usize| d.normals[i] * (d.curvature[i] - d.kappa_bar);
    let mut anchors = [support.project(p[0] + velocity(0) * dt)?.1, support.project(p[n - 1] + velocity(n - 1) * dt)?.1];
    let mut out = Vec::new();
    for pass in 0..2 {
        let mut refl = [Mat2::ZERO; 2];
        let mut bend = [0.0; 2];
        for end in 0..2 {
            let (param, q) = support.project(anchors[end])?;
            anchors[end] = q;
            let sample = support.evaluate(param);
            refl[end] = Mat2::reflection(sample.inner_normal);
            bend[end] = sample.curvature;
        }
        out = solve_semi_implicit(p, d, dt, refl, bend, anchors)?;
        if pass == 0 {
            anchors = [out[0], out[n - 1]];
        }
    }
    Ok(out)
}

fn solve_semi_implicit(p: &[Vec2], d: &Discretization, dt: f64, refl: [Mat2; 2], bend: [f64; 2], anchors: [Vec2; 2]) -> Result<Vec<Vec2>, FlowError> {
    let n = p.len();
    let h = &d.spacing;
    let inv_dt = 1.0 / dt;
    let mut lower = vec![Mat2::ZERO; n];
    let mut diag = vec![Mat2::ZERO; n];
    let mut upper = vec![Mat2::ZERO; n];
    let mut rhs = vec![Vec2::ZERO; n];
    for i in 1..n - 1 {
        let c = 2.0 / (h[i - 1] + h[i]);
        diag[i] = Mat2::scalar(inv_dt + c / h[i] + c / h[i - 1]);
        lower[i] = Mat2::scalar(-c / h[i - 1]);
        upper[i] = Mat2::scalar(-c / h[i]);
        rhs[i] = p[i] * inv_dt - d.normals[i] * d.kappa_bar;
    }
    for (end, i, hh) in [(0usize, 0usize, h[0]), (1, n - 1, h[n - 2])] {
        let m = refl[end];
        let h2 = hh * hh;
        let coupling = (Mat2::scalar(1.0) + m).scale(-1.0 / h2);
        diag[i] = Mat2::scalar(inv_dt + 2.0 / h2);
        if end == 0 {
            upper[i] = coupling;
        } else {
            lower[i] = coupling;
        }
        let b = (Mat2::scalar(1.0) - m).apply(anchors[end]) / h2;
        // A plain mirror ghost forces κ_s = 0 at the endpoint. Sliding along a
        // curved Σ requires κ_s = κ_Σ (κ − κ̄) there, and the missing O(h³)
        // ghost term otherwise shows up as an O(1) rate of end-angle error
        // that the corrector has to undo every step.
        let slope = bend[end] * (d.curvature[i] - d.kappa_bar);
        let ghost_fix = d.normals[i] * (-slope * hh / 3.0);
        rhs[i] = p[i] * inv_dt + b + ghost_fix - d.normals[i] * d.kappa_bar;
    }
    solve_block_tridiagonal(&lower, &diag, &upper, &rhs).ok_or(FlowError::SingularSystem)
}

/// Smoothed |κ| (three passes of the (¼, ½, ¼) filter on interior nodes).
pub(crate) fn smoothed_abs_curvature(curvature: &[f64], periodic: bool) -> Vec<f64> {
    let mut k: Vec<f64> = curvature.iter().map(|v| v.abs()).collect();
    let n = k.len();
    for _ in 0..3 {
        let prev = k.clone();
        if periodic {
            for i in 0..n {
                k[i] = 0.25 * prev[(i + n - 1) % n] + 0.5 * prev[i] + 0.25 * prev[(i + 1) % n];
            }
        } else {
            for i in 1..n - 1 {
                k[i] = 0.25 * prev[i - 1] + 0.5 * prev[i] + 0.25 * prev[i + 1];
            }
        }
    }
    k
}

/// Inverse of a piecewise-linear increasing map `w[i] ↦ s[i]` at `target`.
pub(crate) fn interp_monotone(w: &[f64], s: &[f64], target: f64, hint: &mut usize) -> f64 {
    let mut j = *hint;
    while j + 2 < w.len() && w[j + 1] < target {
        j += 1;
    }
    *hint = j;
    let span = w[j + 1] - w[j];
    let u = if span > 0.0 { ((target - w[j]) / span).clamp(0.0, 1.0) } else { 0.0 };
    s[j] + u * (s[j + 1] - s[j])
}

/// Four-point Lagrange interpolation in chord length on the interval
/// `[s[j], s[j+1]]`, with the stencil shifted inward at the ends. Unlike a
/// natural spline it imposes nothing on the end curvature.
fn local_cubic(s: &[f64], p: &[Vec2], t: f64, j: usize) -> Vec2 {
    let lo = j.saturating_sub(1).min(s.len() - 4);
    let xs = &s[lo..lo + 4];
    let mut out = Vec2::ZERO;
    for a in 0..4 {
        let mut w = 1.0;
        for b in 0..4 {
            if a != b {
                w *= (t - xs[b]) / (xs[a] - xs[b]);
            }
        }
        out = out + p[lo + a] * w;
    }
    out
}

/// Resamples an anchored curve to `count` nodes whose density per unit length is
/// proportional to `1/L + weight·|κ|` (weight 0: uniform arclength), by local cubic
/// interpolation in chord length. Endpoints are kept; contact is not
/// re-enforced here.
pub fn redistribute(anchored: &AnchoredCurve, count: usize, weight: f64) -> Result<Vec<Vec2>, FlowError> {
    let d = discretize(anchored)?;
    let p = anchored.curve().nodes();
    let mut s = Vec::with_capacity(p.len());
    s.push(0.0);
    for h in &d.spacing {
        s.push(s.last().unwrap() + h);
    }
    let k = smoothed_abs_curvature(&d.curvature, false);
    let dens: Vec<f64> = k.iter().map(|k| 1.0 / d.length + weight * k).collect();
    let mut w = vec![0.0];
    for (i, h) in d.spacing.iter().enumerate() {
        w.push(w[i] + 0.5 * h * (dens[i] + dens[i + 1]));
    }
    let total = *w.last().unwrap();
    let mut hint = 0;
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        if i == 0 {
            out.push(p[0]);
        } else if i == count - 1 {
            out.push(p[p.len() - 1]);
        } else {
            let target = total * i as f64 / (count - 1) as f64;
            out.push(local_cubic(&s, p, interp_monotone(&w, &s, target, &mut hint), hint));
        }
    }
    Ok(out)
}

/// Redistributes to `count` nodes and re-anchors.
pub fn resample_anchored(anchored: &AnchoredCurve, count: usize, weight: f64) -> Result<AnchoredCurve, FlowError> {
    let mut nodes = redistribute(anchored, count, weight)?;
    let params = enforce_contact(&mut nodes, anchored.support())?;
    Ok(AnchoredCurve::from_parts(OpenCurve::new(nodes)?, anchored.support().clone(), params))
}
