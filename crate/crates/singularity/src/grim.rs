use apcsf_geometry::{menger_curvature, parabola_endpoint, signed_angle, OpenCurve, Vec2};
use serde::Serialize;

use crate::SingularityError;

/// Lower cut-off of the template curvature `cos ψ` defining the fit window.
pub const WINDOW_CURVATURE: f64 = 0.2;

/// Allowed deviation of max |κ| from 1.
const NORMALIZATION_TOLERANCE: f64 = 0.05;

/// Half-width (radians) of the search for the tip direction around the
/// tangent angle at the max-curvature node.
const TIP_SEARCH: f64 = 0.25;

/// The tangent line of the support at an endpoint that lies on it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ContactLine {
    pub point: Vec2,
    pub direction: Vec2,
}

/// A curve with per-node curvature, typically a rescaled blow-up frame.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RescaledCurve {
    pub nodes: Vec<Vec2>,
    pub curvature: Vec<f64>,
    /// Support contact at the first and last node, if the end lies on one.
    pub contacts: [Option<ContactLine>; 2],
}

impl RescaledCurve {
    /// Computes curvature from the nodes: Menger curvature inside, a ghost
    /// node mirrored across the contact line at contact ends, and a one-sided
    /// parabola at free ends.
    pub fn from_nodes(nodes: Vec<Vec2>, contacts: [Option<ContactLine>; 2]) -> Result<Self, SingularityError> {
        let curve = OpenCurve::new(nodes)?;
        let p = curve.nodes();
        let n = p.len();
        let mut curvature = Vec::with_capacity(n);
        curvature.push(match contacts[0] {
            Some(c) => menger_curvature(p[1].reflect_across(c.point, c.direction), p[0], p[1]),
            None => parabola_endpoint(p[0], p[1], p[2]).curvature,
        });
        for i in 1..n - 1 {
            curvature.push(menger_curvature(p[i - 1], p[i], p[i + 1]));
        }
        curvature.push(match contacts[1] {
            Some(c) => menger_curvature(p[n - 2], p[n - 1], p[n - 2].reflect_across(c.point, c.direction)),
            None => -parabola_endpoint(p[n - 1], p[n - 2], p[n - 3]).curvature,
        });
        Ok(RescaledCurve { nodes: curve.into_nodes(), curvature, contacts })
    }

    pub fn max_abs_curvature(&self) -> f64 {
        self.curvature.iter().fold(0.0, |m, k| m.max(k.abs()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    Interior,
    Boundary,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GrimFit {
    /// Arclength-weighted RMS of `κ − cos ψ` over the window.
    pub residual: f64,
    pub side: Side,
    /// Node index of maximal |κ|.
    pub tip: usize,
    /// First and last node of the window.
    pub window: (usize, usize),
}

/// Unwrapped tangent angle at every node (mean of the adjacent edge angles).
fn node_angles(p: &[Vec2]) -> Vec<f64> {
    let mut edge = vec![(p[1] - p[0]).angle()];
    for i in 1..p.len() - 1 {
        let prev = edge[i - 1];
        edge.push(prev + signed_angle(p[i] - p[i - 1], p[i + 1] - p[i]));
    }
    let mut out = Vec::with_capacity(p.len());
    out.push(edge[0]);
    for i in 1..p.len() - 1 {
        out.push(0.5 * (edge[i - 1] + edge[i]));
    }
    out.push(*edge.last().unwrap());
    out
}

/// Compares the curvature profile with the grim reaper's `κ = cos ψ`, ψ the
/// tangent angle measured from the tip. The tip direction is refined over a
/// small range around the tangent at the max-curvature node so that the
/// comparison does not depend on where the nodes happen to fall.
pub fn grim_reaper_fit(curve: &RescaledCurve) -> Result<GrimFit, SingularityError> {
    let p = &curve.nodes;
    let n = p.len();
    if n < 5 || curve.curvature.len() != n {
        return Err(SingularityError::InsufficientResolution("fewer than 5 nodes".into()));
    }
    let (tip, kmax) = curve
        .curvature
        .iter()
        .enumerate()
        .fold((0, 0.0), |a, (i, k)| if k.abs() > a.1 { (i, k.abs()) } else { a });
    if !((kmax - 1.0).abs() <= NORMALIZATION_TOLERANCE) {
        return Err(SingularityError::NotNormalized { kappa_max: kmax });
    }
    let sign = curve.curvature[tip].signum();
    let theta: Vec<f64> = node_angles(p).into_iter().map(|t| sign * t).collect();
    let kappa: Vec<f64> = curve.curvature.iter().map(|k| sign * k).collect();
    let h: Vec<f64> = p.windows(2).map(|w| w[0].distance(w[1])).collect();
    let weight = |i: usize| 0.5 * (if i > 0 { h[i - 1] } else { 0.0 } + if i + 1 < n { h[i] } else { 0.0 });
    let inside = |i: usize, psi0: f64| {
        let d = theta[i] - psi0;
        d.abs() < std::f64::consts::FRAC_PI_2 && d.cos() >= WINDOW_CURVATURE
    };
    let evaluate = |psi0: f64| {
        let mut lo = tip;
        while lo > 0 && inside(lo - 1, psi0) {
            lo -= 1;
        }
        let mut hi = tip;
        while hi + 1 < n && inside(hi + 1, psi0) {
            hi += 1;
        }
        let (mut num, mut den) = (0.0, 0.0);
        for i in lo..=hi {
            let w = weight(i);
            num += w * (kappa[i] - (theta[i] - psi0).cos()).powi(2);
            den += w;
        }
        ((num / den).sqrt(), (lo, hi))
    };
    let center = theta[tip];
    let grid = 400;
    let step = 2.0 * TIP_SEARCH / grid as f64;
    let mut best = (f64::INFINITY, center);
    for g in 0..=grid {
        let psi0 = center - TIP_SEARCH + step * g as f64;
        let r = evaluate(psi0).0;
        if r < best.0 {
            best = (r, psi0);
        }
    }
    // Golden-section refinement inside the best grid cell.
    let (mut a, mut b) = (best.1 - step, best.1 + step);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..40 {
        let (c, d) = (b - g * (b - a), a + g * (b - a));
        if evaluate(c).0 < evaluate(d).0 {
            b = d;
        } else {
            a = c;
        }
    }
    let refined = 0.5 * (a + b);
    let psi0 = if evaluate(refined).0 < best.0 { refined } else { best.1 };
    let (residual, window) = evaluate(psi0);
    let touches = (window.0 == 0 && curve.contacts[0].is_some()) || (window.1 == n - 1 && curve.contacts[1].is_some());
    Ok(GrimFit { residual, side: if touches { Side::Boundary } else { Side::Interior }, tip, window })
}

/// The grim reaper `x = −log cos y` for `y ∈ [y0, y1]` (|y| < π/2), sampled
/// uniformly in arclength. Its tip is at the origin with unit curvature.
pub fn grim_reaper(n: usize, y0: f64, y1: f64) -> Result<OpenCurve, SingularityError> {
    // Arclength from the tip is s(y) = asinh(tan y), so y(s) = atan(sinh s).
    let (s0, s1) = (y0.tan().asinh(), y1.tan().asinh());
    let nodes = (0..n)
        .map(|i| {
            let s = s0 + (s1 - s0) * i as f64 / (n - 1) as f64;
            let y = s.sinh().atan();
            Vec2::new(-y.cos().ln(), y)
        })
        .collect();
    Ok(OpenCurve::new(nodes)?)
}

/// The half `y ∈ [0, y1]`, starting at the tip on the symmetry axis y = 0.
pub fn half_grim_reaper(n: usize, y1: f64) -> Result<OpenCurve, SingularityError> {
    grim_reaper(n, 0.0, y1)
}
