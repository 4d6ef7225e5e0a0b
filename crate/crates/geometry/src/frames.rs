use std::f64::consts::PI;

use crate::{edge_lengths, ClosedCurve, GeometryError, OpenCurve, Vec2};

/// Tangent, normal and curvature at one node.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameSample {
    pub tangent: Vec2,
    /// `J · tangent`.
    pub normal: Vec2,
    pub curvature: f64,
    /// Length of the dual cell around the node (half of each adjacent edge).
    pub arclength_weight: f64,
}

/// Signed angle rotating `u` onto `v`, in (−π, π].
#[inline]
pub fn signed_angle(u: Vec2, v: Vec2) -> f64 {
    u.cross(v).atan2(u.dot(v))
}

/// Curvature of the circle through three points, signed by the turn direction.
#[inline]
pub fn menger_curvature(a: Vec2, b: Vec2, c: Vec2) -> f64 {
    let u = b - a;
    let v = c - b;
    let w = c - a;
    2.0 * u.cross(v) / (u.norm() * v.norm() * w.norm())
}

/// One-sided quadratic fit at the first of three nodes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParabolaEnd {
    /// Derivative of the interpolant with respect to chord length at `p0`
    /// (points from `p0` into the curve, close to unit length).
    pub derivative: Vec2,
    /// Curvature at `p0` for traversal from `p0` towards `p2`.
    pub curvature: f64,
}

/// Lagrange parabola through `p0, p1, p2` parametrised by cumulative chord length.
pub fn parabola_endpoint(p0: Vec2, p1: Vec2, p2: Vec2) -> ParabolaEnd {
    let h0 = p0.distance(p1);
    let h1 = p1.distance(p2);
    let c1 = (h0 + h1) / (h0 * h1);
    let c2 = -h0 / (h1 * (h0 + h1));
    let c0 = -(c1 + c2);
    let d1 = p0 * c0 + p1 * c1 + p2 * c2;
    let d2 = (p0 / (h0 * (h0 + h1)) - p1 / (h0 * h1) + p2 / (h1 * (h0 + h1))) * 2.0;
    let speed = d1.norm();
    ParabolaEnd { derivative: d1, curvature: d1.cross(d2) / (speed * speed * speed) }
}

/// Unit tangents at `a` and `b` from the one-sided parabola fits, both pointing
/// in the direction of increasing parameter.
pub fn endpoint_tangents(curve: &OpenCurve) -> (Vec2, Vec2) {
    let p = curve.nodes();
    let n = p.len();
    let ea = parabola_endpoint(p[0], p[1], p[2]);
    let eb = parabola_endpoint(p[n - 1], p[n - 2], p[n - 3]);
    (ea.derivative.normalized(), -eb.derivative.normalized())
}

/// Discrete curvature per node: Menger curvature inside, parabola fit at the ends.
pub fn node_curvatures(curve: &OpenCurve) -> Vec<f64> {
    let p = curve.nodes();
    let n = p.len();
    let mut k = Vec::with_capacity(n);
    k.push(parabola_endpoint(p[0], p[1], p[2]).curvature);
    for i in 1..n - 1 {
        k.push(menger_curvature(p[i - 1], p[i], p[i + 1]));
    }
    // Traversing the fit backwards flips the sign of the curvature.
    k.push(-parabola_endpoint(p[n - 1], p[n - 2], p[n - 3]).curvature);
    k
}

pub fn frames(curve: &OpenCurve) -> Result<Vec<FrameSample>, GeometryError> {
    let p = curve.nodes();
    let n = p.len();
    let h = edge_lengths(p);
    let kappa = node_curvatures(curve);
    let (ta, tb) = endpoint_tangents(curve);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let (tangent, weight) = if i == 0 {
            (ta, 0.5 * h[0])
        } else if i == n - 1 {
            (tb, 0.5 * h[n - 2])
        } else {
            let (hm, hp) = (h[i - 1], h[i]);
            let d = (p[i + 1] - p[i]) * (hm / (hp * (hm + hp)))
                + (p[i] - p[i - 1]) * (hp / (hm * (hm + hp)));
            (d.normalized(), 0.5 * (hm + hp))
        };
        if !tangent.is_finite() || !kappa[i].is_finite() {
            return Err(GeometryError::DegenerateCurve(format!("frame undefined at node {i}")));
        }
        out.push(FrameSample { tangent, normal: tangent.perp(), curvature: kappa[i], arclength_weight: weight });
    }
    Ok(out)
}

/// Tangent-turning total with the given end tangents: the sum of the signed
/// angles between consecutive edges plus the rotation from `ta` onto the first
/// edge and from the last edge onto `tb`.
pub fn total_curvature_with_tangents(curve: &OpenCurve, ta: Vec2, tb: Vec2) -> f64 {
    let p = curve.nodes();
    let n = p.len();
    let mut total = signed_angle(ta, p[1] - p[0]) + signed_angle(p[n - 1] - p[n - 2], tb);
    for i in 1..n - 1 {
        total += signed_angle(p[i] - p[i - 1], p[i + 1] - p[i]);
    }
    total
}

/// Discrete ∫κ ds of an open curve, using the parabola tangents at the ends.
pub fn total_curvature(curve: &OpenCurve) -> f64 {
    let (ta, tb) = endpoint_tangents(curve);
    total_curvature_with_tangents(curve, ta, tb)
}

/// Total turning (vertex angles, with declared exterior angles substituted at
/// corners) divided by 2π, before rounding.
pub fn turning_number_raw(curve: &ClosedCurve) -> f64 {
    let p = curve.nodes();
    let n = p.len();
    let mut total = 0.0;
    for i in 0..n {
        let prev = p[(i + n - 1) % n];
        let next = p[(i + 1) % n];
        total += match curve.corners().iter().find(|c| c.index == i) {
            Some(c) => c.angle,
            None => signed_angle(p[i] - prev, next - p[i]),
        };
    }
    total / (2.0 * PI)
}

pub fn turning_number(curve: &ClosedCurve) -> Result<i64, GeometryError> {
    let raw = turning_number_raw(curve);
    let m = raw.round();
    if (raw - m).abs() > 0.1 {
        return Err(GeometryError::NonIntegerTurning { value: raw });
    }
    Ok(m as i64)
}

pub fn is_convex(curve: &OpenCurve, tolerance: f64) -> bool {
    node_curvatures(curve).iter().all(|&k| k >= -tolerance)
}
