//! The same scheme on closed polygons (no boundary), used by the reflected
//! line-mode solver.

use apcsf_geometry::{menger_curvature, signed_angle, Vec2};
use apcsf_support::spline::{solve_cyclic_tridiagonal, CubicSpline2};

use crate::discrete::trapezoid;
use crate::step::{interp_monotone, smoothed_abs_curvature};
use crate::{FlowConfig, FlowError, Scheme};

#[derive(Clone, Debug)]
pub struct ClosedDiscretization {
    pub curvature: Vec<f64>,
    pub normals: Vec<Vec2>,
    /// `spacing[i] = |x[i+1] − x[i]|`, cyclically.
    pub spacing: Vec<f64>,
    pub length: f64,
    /// Sum of exterior angles, `2π·index` for a corner-free polygon.
    pub total_curvature: f64,
    pub kappa_bar: f64,
}

impl ClosedDiscretization {
    pub fn kappa_max(&self) -> f64 {
        self.curvature.iter().fold(0.0, |m, k| m.max(k.abs()))
    }

    pub fn kappa_sq_integral(&self) -> f64 {
        let mut v: Vec<f64> = self.curvature.iter().map(|k| k * k).collect();
        v.push(v[0]);
        trapezoid(&v, &self.spacing)
    }

    pub fn min_spacing(&self) -> f64 {
        self.spacing.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

fn degenerate(msg: &str) -> FlowError {
    apcsf_geometry::GeometryError::DegenerateCurve(msg.into()).into()
}

pub fn closed_discretize(p: &[Vec2]) -> Result<ClosedDiscretization, FlowError> {
    let n = p.len();
    if n < 4 {
        return Err(degenerate("fewer than 4 nodes"));
    }
    let mut curvature = Vec::with_capacity(n);
    let mut normals = Vec::with_capacity(n);
    let mut spacing = Vec::with_capacity(n);
    let mut turning = 0.0;
    for i in 0..n {
        let (a, b, c) = (p[(i + n - 1) % n], p[i], p[(i + 1) % n]);
        curvature.push(menger_curvature(a, b, c));
        normals.push((c - a).normalized().perp());
        spacing.push(b.distance(c));
        turning += signed_angle(b - a, c - b);
    }
    if curvature.iter().chain(&spacing).any(|v| !v.is_finite()) || spacing.iter().any(|h| *h <= 0.0) {
        return Err(degenerate("non-finite or coincident nodes"));
    }
    let length: f64 = spacing.iter().sum();
    Ok(ClosedDiscretization { curvature, normals, kappa_bar: turning / length, spacing, length, total_curvature: turning })
}

pub fn closed_stable_dt(d: &ClosedDiscretization, config: &FlowConfig) -> f64 {
    let kmax = d.kappa_max();
    match config.scheme {
        Scheme::SemiImplicit => config.dt_safety / (kmax * kmax).max(1e-300),
        Scheme::Explicit => {
            let h = d.min_spacing();
            config.dt_safety * h * h / (kmax * kmax * h * h).max(1.0)
        }
    }
}

/// One step of `∂δ/∂t = (κ − κ̄)ν` for a closed polygon.
pub fn closed_step(p: &[Vec2], d: &ClosedDiscretization, dt: f64, scheme: Scheme) -> Result<Vec<Vec2>, FlowError> {
    let n = p.len();
    let out = match scheme {
        Scheme::Explicit => p
            .iter()
            .zip(d.curvature.iter().zip(&d.normals))
            .map(|(x, (k, nu))| *x + *nu * ((k - d.kappa_bar) * dt))
            .collect::<Vec<_>>(),
        Scheme::SemiImplicit => {
            let h = &d.spacing;
            let inv_dt = 1.0 / dt;
            let mut lower = vec![0.0; n];
            let mut diag = vec![0.0; n];
            let mut upper = vec![0.0; n];
            for i in 0..n {
                let hp = h[(i + n - 1) % n];
                let c = 2.0 / (hp + h[i]);
                diag[i] = inv_dt + c / h[i] + c / hp;
                lower[i] = -c / hp;
                upper[i] = -c / h[i];
            }
            let mut rx: Vec<f64> = (0..n).map(|i| p[i].x * inv_dt - d.normals[i].x * d.kappa_bar).collect();
            let mut ry: Vec<f64> = (0..n).map(|i| p[i].y * inv_dt - d.normals[i].y * d.kappa_bar).collect();
            solve_cyclic_tridiagonal(&lower, &diag, &upper, &mut rx).ok_or(FlowError::SingularSystem)?;
            solve_cyclic_tridiagonal(&lower, &diag, &upper, &mut ry).ok_or(FlowError::SingularSystem)?;
            rx.into_iter().zip(ry).map(|(x, y)| Vec2::new(x, y)).collect()
        }
    };
    if out.iter().any(|v| !v.is_finite()) {
        return Err(degenerate("non-finite update"));
    }
    Ok(out)
}

/// Curvature-weighted resampling of a closed polygon with node 0 kept in place.
pub fn redistribute_closed(p: &[Vec2], weight: f64) -> Result<Vec<Vec2>, FlowError> {
    let d = closed_discretize(p)?;
    let n = p.len();
    let mut s = vec![0.0];
    for h in &d.spacing {
        s.push(s.last().unwrap() + h);
    }
    let k = smoothed_abs_curvature(&d.curvature, true);
    let dens = |i: usize| 1.0 / d.length + weight * k[i % n];
    let mut w = vec![0.0];
    for i in 0..n {
        w.push(w[i] + 0.5 * d.spacing[i] * (dens(i) + dens(i + 1)));
    }
    let spline = CubicSpline2::periodic(s[..n].to_vec(), p.to_vec(), d.length).ok_or_else(|| degenerate("spline"))?;
    let total = w[n];
    let mut hint = 0;
    let mut out = Vec::with_capacity(n);
    out.push(p[0]);
    for i in 1..n {
        let target = total * i as f64 / n as f64;
        out.push(spline.eval(interp_monotone(&w, &s, target, &mut hint)));
    }
    Ok(out)
}
