use apcsf_geometry::{parabola_endpoint, signed_angle, total_curvature_with_tangents, OpenCurve, Vec2};

use std::f64::consts::PI;

use crate::support::ANGLE_TOLERANCE;
use crate::{enclosed_area, BoundaryArc, SupportCurve, SupportError};

const CORRECTOR_ITERATIONS: usize = 5;

/// An open curve whose endpoints sit on Σ with perpendicular, outward contact.
#[derive(Clone, Debug)]
pub struct AnchoredCurve {
    curve: OpenCurve,
    support: SupportCurve,
    params: [f64; 2],
}

/// Measured contact errors of an anchored configuration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContactReport {
    pub distance_a: f64,
    pub distance_b: f64,
    /// Angle between the discrete end tangent and −ν_Σ at `a`.
    pub angle_a: f64,
    /// Angle between the discrete end tangent and +ν_Σ at `b`.
    pub angle_b: f64,
}

impl ContactReport {
    pub fn max_angle(&self) -> f64 {
        self.angle_a.max(self.angle_b)
    }
}

/// Measures how far `curve` is from satisfying the boundary conditions.
pub fn contact_report(curve: &OpenCurve, support: &SupportCurve) -> Result<(ContactReport, [f64; 2]), SupportError> {
    let p = curve.nodes();
    let n = p.len();
    let (pa, qa) = support.project(p[0])?;
    let (pb, qb) = support.project(p[n - 1])?;
    let ta = parabola_endpoint(p[0], p[1], p[2]).derivative;
    let tb = -parabola_endpoint(p[n - 1], p[n - 2], p[n - 3]).derivative;
    let na = support.evaluate(pa).inner_normal;
    let nb = support.evaluate(pb).inner_normal;
    Ok((
        ContactReport {
            distance_a: p[0].distance(qa),
            distance_b: p[n - 1].distance(qb),
            angle_a: signed_angle(-na, ta).abs(),
            angle_b: signed_angle(nb, tb).abs(),
        },
        [pa, pb],
    ))
}

/// Fraction of the curve length, and of the node count, over which the
/// corrector spreads its rotation.
const CORRECTOR_WINDOW: f64 = 0.125;

/// Two-stage boundary corrector: project both endpoints onto Σ, then rotate
/// the nodes near each end about the endpoint so that the one-sided parabola
/// through the last three nodes leaves Σ along its normal. The rotation angle
/// tapers smoothly (cosine profile) to zero over an eighth of the curve, so the
/// correction does not put a kink into the curvature next to the endpoint.
/// When nodes crowd towards the end the window shrinks to the first eighth of
/// the nodes: rotating a long stretch about an endpoint sitting in a tiny,
/// highly curved region would distort the rest of the curve.
/// The rotation sweeps area, which the flow would otherwise pick up as an
/// N-independent drift, so each rotation is followed by an area-restoring push
/// of the window's interior nodes. Both stages are repeated up to five times. Returns the endpoint parameters.
pub fn enforce_contact(nodes: &mut [Vec2], support: &SupportCurve) -> Result<[f64; 2], SupportError> {
    let n = nodes.len();
    if n < 4 {
        return Err(apcsf_geometry::GeometryError::DegenerateCurve("fewer than 4 nodes".into()).into());
    }
    let mut params = [0.0; 2];
    for _ in 0..CORRECTOR_ITERATIONS {
        let mut worst: f64 = 0.0;
        for end in 0..2 {
            let idx = |k: usize| if end == 0 { k } else { n - 1 - k };
            let (param, q) = support.project(nodes[idx(0)])?;
            params[end] = param;
            nodes[idx(0)] = q;
            let target = -support.evaluate(param).inner_normal;
            let der = parabola_endpoint(q, nodes[idx(1)], nodes[idx(2)]).derivative;
            let theta = signed_angle(der, target);
            if !theta.is_finite() {
                return Err(SupportError::ProjectionDiverged);
            }
            worst = worst.max(theta.abs());
            let length: f64 = nodes.windows(2).map(|w| w[0].distance(w[1])).sum();
            let reach_nodes = ((CORRECTOR_WINDOW * n as f64) as usize).max(3);
            let local: f64 = (0..reach_nodes.min(n - 1)).map(|k| nodes[idx(k)].distance(nodes[idx(k + 1)])).sum();
            let window = (CORRECTOR_WINDOW * length).min(local);
            let before = polyline_area(nodes);
            let mut s = 0.0;
            let mut prev = q;
            let mut reach = Vec::new();
            for k in 1..n - 1 {
                let i = idx(k);
                s += nodes[i].distance(prev);
                prev = nodes[i];
                if s >= window && k > 2 {
                    break;
                }
                let u = (s / window).min(1.0);
                let w = 0.5 * (1.0 + (PI * u).cos());
                let (sin, cos) = (theta * w).sin_cos();
                let r = nodes[i] - q;
                nodes[i] = q + Vec2::new(cos * r.x - sin * r.y, sin * r.x + cos * r.y);
                if k > 2 {
                    reach.push((i, (PI * u).sin().powi(2)));
                }
            }
            restore_area(nodes, &reach, before);
        }
        if worst < 1e-3 * ANGLE_TOLERANCE {
            break;
        }
    }
    Ok(params)
}

/// Signed shoelace area of the open polyline. With both endpoints held fixed,
/// its changes equal the changes of A(γ + σ).
fn polyline_area(p: &[Vec2]) -> f64 {
    0.5 * p.windows(2).map(|w| w[0].cross(w[1])).sum::<f64>()
}

/// Pushes the nodes listed in `reach` along the area gradient, weighted by
/// their bump factor, until the polyline area is back at `target`. The three
/// nodes that fix the end tangent are not in `reach`, and the bump vanishes at
/// the window edge, so the contact is left alone. A second Newton step removes
/// the quadratic remainder of the first.
fn restore_area(p: &mut [Vec2], reach: &[(usize, f64)], target: f64) {
    let n = p.len();
    let grad = |p: &[Vec2], i: usize| {
        let d = p[(i + 1).min(n - 1)] - p[i.saturating_sub(1)];
        Vec2::new(0.5 * d.y, -0.5 * d.x)
    };
    for _ in 0..2 {
        let denom: f64 = reach.iter().map(|&(i, b)| b * grad(p, i).norm_sq()).sum();
        if !(denom > 0.0) {
            return;
        }
        let eps = (target - polyline_area(p)) / denom;
        let moves: Vec<Vec2> = reach.iter().map(|&(i, b)| grad(p, i) * (eps * b)).collect();
        for (&(i, _), m) in reach.iter().zip(moves) {
            p[i] = p[i] + m;
        }
    }
}

impl AnchoredCurve {
    /// Validates contact position and angle without modifying the curve.
    pub fn new(curve: OpenCurve, support: SupportCurve) -> Result<Self, SupportError> {
        let (report, params) = contact_report(&curve, &support)?;
        let tol = support.contact_tolerance();
        for (end, d) in [('a', report.distance_a), ('b', report.distance_b)] {
            if !(d <= tol) {
                return Err(SupportError::OffSupport { end, distance: d, tolerance: tol });
            }
        }
        for (end, angle) in [('a', report.angle_a), ('b', report.angle_b)] {
            if !(angle <= ANGLE_TOLERANCE) {
                return Err(SupportError::NotPerpendicular { end, angle, tolerance: ANGLE_TOLERANCE });
            }
        }
        Ok(AnchoredCurve { curve, support, params })
    }

    /// Runs the boundary corrector on the curve, then validates.
    pub fn anchor(curve: OpenCurve, support: SupportCurve) -> Result<Self, SupportError> {
        let mut nodes = curve.into_nodes();
        enforce_contact(&mut nodes, &support)?;
        Self::new(OpenCurve::new(nodes)?, support)
    }

    /// Wraps a curve whose contact was just enforced, skipping re-validation.
    pub fn from_parts(curve: OpenCurve, support: SupportCurve, params: [f64; 2]) -> Self {
        AnchoredCurve { curve, support, params }
    }

    pub fn curve(&self) -> &OpenCurve {
        &self.curve
    }

    pub fn support(&self) -> &SupportCurve {
        &self.support
    }

    /// Σ-parameters of γ(a) and γ(b).
    pub fn endpoint_params(&self) -> [f64; 2] {
        self.params
    }

    pub fn contact(&self) -> ContactReport {
        contact_report(&self.curve, &self.support).map(|r| r.0).expect("anchored endpoints project")
    }

    /// The prescribed tangents `τ(a) = −ν_Σ(γ(a))`, `τ(b) = +ν_Σ(γ(b))`.
    pub fn boundary_tangents(&self) -> (Vec2, Vec2) {
        (-self.support.evaluate(self.params[0]).inner_normal, self.support.evaluate(self.params[1]).inner_normal)
    }

    /// ∫κ ds as the tangent-turning total closed off with the prescribed end tangents.
    pub fn total_curvature(&self) -> f64 {
        let (ta, tb) = self.boundary_tangents();
        total_curvature_with_tangents(&self.curve, ta, tb)
    }

    pub fn short_piece(&self) -> Result<BoundaryArc, SupportError> {
        self.support.short_piece(self.params[1], self.params[0])
    }

    /// A(γ + σ) with σ the short piece.
    pub fn enclosed_area(&self) -> Result<f64, SupportError> {
        enclosed_area(self, &self.short_piece()?)
    }

    /// The same configuration traversed from `b` to `a`.
    pub fn reversed(&self) -> AnchoredCurve {
        AnchoredCurve { curve: self.curve.reversed(), support: self.support.clone(), params: [self.params[1], self.params[0]] }
    }
}
