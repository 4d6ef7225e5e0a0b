use apcsf_geometry::{edge_lengths, menger_curvature, Vec2};
use apcsf_support::AnchoredCurve;

use crate::mat2::Mat2;
use crate::FlowError;

/// Everything the steppers need from one anchored configuration.
///
/// Endpoint quantities use a ghost node: the neighbour of an endpoint mirrored
/// across the tangent line of Σ at that endpoint. Perpendicular contact makes the
/// mirrored polyline smooth through the endpoint, so the interior stencils apply
/// unchanged at the ends.
#[derive(Clone, Debug)]
pub struct Discretization {
    pub curvature: Vec<f64>,
    pub normals: Vec<Vec2>,
    pub spacing: Vec<f64>,
    pub length: f64,
    pub total_curvature: f64,
    pub kappa_bar: f64,
}

impl Discretization {
    pub fn kappa_max(&self) -> f64 {
        self.curvature.iter().fold(0.0, |m, k| m.max(k.abs()))
    }

    pub fn kappa_min(&self) -> f64 {
        self.curvature.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Trapezoid ∫κ² ds.
    pub fn kappa_sq_integral(&self) -> f64 {
        trapezoid(&self.curvature.iter().map(|k| k * k).collect::<Vec<_>>(), &self.spacing)
    }

    /// Trapezoid ∫(κ − κ̄)² ds.
    pub fn curvature_spread(&self) -> f64 {
        trapezoid(&self.curvature.iter().map(|k| (k - self.kappa_bar).powi(2)).collect::<Vec<_>>(), &self.spacing)
    }

    pub fn min_spacing(&self) -> f64 {
        self.spacing.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

pub(crate) fn trapezoid(values: &[f64], spacing: &[f64]) -> f64 {
    spacing.iter().enumerate().map(|(i, h)| 0.5 * h * (values[i] + values[i + 1])).sum()
}

pub(crate) fn ghost(endpoint: Vec2, neighbour: Vec2, reflection: Mat2) -> Vec2 {
    endpoint + reflection.apply(neighbour - endpoint)
}

pub fn discretize(anchored: &AnchoredCurve) -> Result<Discretization, FlowError> {
    let p = anchored.curve().nodes();
    let n = p.len();
    let support = anchored.support();
    let params = anchored.endpoint_params();
    let ga = ghost(p[0], p[1], Mat2::reflection(support.evaluate(params[0]).inner_normal));
    let gb = ghost(p[n - 1], p[n - 2], Mat2::reflection(support.evaluate(params[1]).inner_normal));
    let at = |i: isize| -> Vec2 {
        if i < 0 {
            ga
        } else if i as usize >= n {
            gb
        } else {
            p[i as usize]
        }
    };
    let mut curvature = Vec::with_capacity(n);
    let mut normals = Vec::with_capacity(n);
    for i in 0..n as isize {
        let (a, b, c) = (at(i - 1), at(i), at(i + 1));
        curvature.push(menger_curvature(a, b, c));
        let t = (c - a).normalized();
        normals.push(t.perp());
    }
    if curvature.iter().any(|k| !k.is_finite()) || normals.iter().any(|v| !v.is_finite()) {
        return Err(apcsf_geometry::GeometryError::DegenerateCurve("non-finite discrete curvature".into()).into());
    }
    let spacing = edge_lengths(p);
    let length: f64 = spacing.iter().sum();
    let total_curvature = anchored.total_curvature();
    Ok(Discretization { curvature, normals, spacing, length, total_curvature, kappa_bar: total_curvature / length })
}

/// Per-node velocity vectors `(κ_i − κ̄)·ν_i`.
pub fn velocity_field(anchored: &AnchoredCurve) -> Result<Vec<Vec2>, FlowError> {
    let d = discretize(anchored)?;
    Ok(d.curvature.iter().zip(&d.normals).map(|(k, nu)| *nu * (k - d.kappa_bar)).collect())
}
