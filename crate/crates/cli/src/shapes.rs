//! Simple initial curves besides the example recipes.

use std::f64::consts::PI;

use apcsf_geometry::{OpenCurve, Vec2};
use apcsf_support::spline::CubicSpline2;
use apcsf_support::{AnchoredCurve, SupportCurve, SupportKind};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// An arc meeting Σ perpendicularly: on a circle, the outer part of the
/// circle of radius `radius` orthogonal to Σ centred in direction `at`; on a
/// line, the half circle of radius `radius` about the line's base point.
/// `bump` superimposes `1 + bump·sin⁴(πu)·cos(3πu)` on the radius (u ∈ [0, 1]
/// along the arc), which keeps the contact perpendicular.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcParams {
    pub radius: f64,
    #[serde(default)]
    pub bump: f64,
    /// Direction (radians) of the arc's centre seen from the circle's centre.
    #[serde(default = "default_at")]
    pub at: f64,
    #[serde(default = "default_nodes")]
    pub nodes: usize,
}

fn default_at() -> f64 {
    PI / 2.0
}

fn default_nodes() -> usize {
    400
}

fn profile(u: f64, bump: f64) -> f64 {
    1.0 + bump * (PI * u).sin().powi(4) * (3.0 * PI * u).cos()
}

pub fn perpendicular_arc(support: &SupportCurve, params: &ArcParams) -> Result<AnchoredCurve, CliError> {
    let n = params.nodes.max(8);
    let rho = params.radius;
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(CliError::Config(format!("arc radius must be positive, got {rho}")));
    }
    let nodes: Vec<Vec2> = match support.kind() {
        SupportKind::Circle { center, radius } => {
            let d = (radius * radius + rho * rho).sqrt();
            let rot = Vec2::from_angle(params.at - PI / 2.0);
            let turn = |v: Vec2| Vec2::new(rot.x * v.x - rot.y * v.y, rot.y * v.x + rot.x * v.y);
            let c = Vec2::new(0.0, d);
            let right = Vec2::new(rho * radius / d, radius * radius / d);
            let a0 = (right - c).angle();
            let a1 = PI - a0;
            (0..n)
                .map(|i| {
                    let u = i as f64 / (n - 1) as f64;
                    let th = a0 + (a1 - a0) * u;
                    *center + turn(c + Vec2::from_angle(th) * (rho * profile(u, params.bump)))
                })
                .collect()
        }
        SupportKind::Line { point, direction } => {
            let out = -support.evaluate(0.0).inner_normal;
            (0..n)
                .map(|i| {
                    let u = i as f64 / (n - 1) as f64;
                    let th = PI * u;
                    *point + (*direction * -th.cos() + out * th.sin()) * (rho * profile(u, params.bump))
                })
                .collect()
        }
        _ => return Err(CliError::Config("arc initial curves need a circle or line support".into())),
    };
    Ok(AnchoredCurve::anchor(OpenCurve::new(nodes)?, support.clone())?)
}

/// Control points interpolated by a natural cubic spline in chord length;
/// the result is sampled uniformly and anchored (endpoints projected onto Σ,
/// end tangents corrected).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplineParams {
    pub points: Vec<[f64; 2]>,
    #[serde(default = "default_nodes")]
    pub nodes: usize,
}

pub fn spline_curve(support: &SupportCurve, params: &SplineParams) -> Result<AnchoredCurve, CliError> {
    let pts: Vec<Vec2> = params.points.iter().copied().map(Vec2::from).collect();
    if pts.len() < 3 {
        return Err(CliError::Config("a spline needs at least 3 control points".into()));
    }
    let mut s = vec![0.0];
    for w in pts.windows(2) {
        let h = w[0].distance(w[1]);
        if !(h > 0.0) {
            return Err(CliError::Config("repeated spline control point".into()));
        }
        s.push(s.last().unwrap() + h);
    }
    let total = *s.last().unwrap();
    let spline = CubicSpline2::natural(s, pts).ok_or_else(|| CliError::Config("spline construction failed".into()))?;
    let n = params.nodes.max(8);
    let nodes = (0..n).map(|i| spline.eval(total * i as f64 / (n - 1) as f64)).collect();
    Ok(AnchoredCurve::anchor(OpenCurve::new(nodes)?, support.clone())?)
}
