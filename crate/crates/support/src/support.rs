use std::f64::consts::{PI, TAU};

use apcsf_geometry::{signed_angle, Vec2};

use crate::spline::CubicSpline2;
use crate::SupportError;

/// Minimum number of samples kept for parametric-table supports.
pub const TABLE_MIN_SAMPLES: usize = 4096;
/// Contact tolerance relative to the minimum width (or absolute for lines).
pub const CONTACT_TOLERANCE_FACTOR: f64 = 1e-7;
/// Maximal deviation of the discrete end tangent from `∓ν_Σ`, radians.
pub const ANGLE_TOLERANCE: f64 = 1e-5;
/// Normal-turning window around π in which endpoints count as antipodal.
pub const ANTIPODAL_TOLERANCE: f64 = 1e-3;

const WIDTH_SWEEP: usize = 4096;

/// Position, unit tangent, inner unit normal (`J·tangent`) and curvature of Σ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupportSample {
    pub point: Vec2,
    pub tangent: Vec2,
    pub inner_normal: Vec2,
    pub curvature: f64,
}

#[derive(Clone, Debug)]
pub enum SupportKind {
    Circle { center: Vec2, radius: f64 },
    /// Semi-axes `a ≥ b`, the major axis rotated by `rotation` radians.
    Ellipse { center: Vec2, a: f64, b: f64, rotation: f64 },
    Table(Table),
    /// `f(s) = point + s·direction`.
    Line { point: Vec2, direction: Vec2 },
}

/// Dense closed cubic table of a convex curve.
#[derive(Clone, Debug)]
pub struct Table {
    spline: CubicSpline2,
    samples: Vec<Vec2>,
    period: f64,
}

impl Table {
    pub fn samples(&self) -> &[Vec2] {
        &self.samples
    }
}

/// The fixed support curve Σ. Immutable once built; the minimum width is
/// computed once at construction.
#[derive(Clone, Debug)]
pub struct SupportCurve {
    kind: SupportKind,
    width: f64,
}

impl SupportCurve {
    pub fn circle(center: Vec2, radius: f64) -> Result<Self, SupportError> {
        if !(radius > 0.0 && radius.is_finite()) || !center.is_finite() {
            return Err(SupportError::InvalidSupport(format!("circle radius {radius}")));
        }
        Ok(Self::finish(SupportKind::Circle { center, radius }))
    }

    pub fn ellipse(center: Vec2, a: f64, b: f64, rotation: f64) -> Result<Self, SupportError> {
        if !(b > 0.0 && a >= b && a.is_finite()) || !center.is_finite() || !rotation.is_finite() {
            return Err(SupportError::InvalidSupport(format!("ellipse semi-axes {a}, {b}")));
        }
        Ok(Self::finish(SupportKind::Ellipse { center, a, b, rotation }))
    }

    /// The x-axis parametrised as `f(s) = (−s, 0)`: the inner normal points down
    /// and anchored curves live in the upper half-plane.
    pub fn x_axis() -> Self {
        Self::finish(SupportKind::Line { point: Vec2::ZERO, direction: Vec2::new(-1.0, 0.0) })
    }

    pub fn line(point: Vec2, direction: Vec2) -> Result<Self, SupportError> {
        let n = direction.norm();
        if !(n > 0.0 && n.is_finite()) || !point.is_finite() {
            return Err(SupportError::InvalidSupport("line direction must be non-zero".into()));
        }
        Ok(Self::finish(SupportKind::Line { point, direction: direction / n }))
    }

    /// Closed convex curve given by a node table. Tables with fewer than
    /// [`TABLE_MIN_SAMPLES`] nodes are densified through a periodic cubic
    /// spline; clockwise tables are reversed.
    pub fn table(nodes: &[Vec2]) -> Result<Self, SupportError> {
        if nodes.len() < 4 || nodes.iter().any(|p| !p.is_finite()) {
            return Err(SupportError::InvalidSupport("table needs at least 4 finite nodes".into()));
        }
        let mut nodes = nodes.to_vec();
        if apcsf_geometry::signed_area_of(&nodes) < 0.0 {
            nodes.reverse();
        }
        let coarse = chord_spline(&nodes)?;
        let n = nodes.len().max(TABLE_MIN_SAMPLES);
        let total = coarse.end() - coarse.start();
        let dense: Vec<Vec2> = (0..n).map(|i| coarse.eval(total * i as f64 / n as f64)).collect();
        let spline = chord_spline(&dense)?;
        let period = spline.end() - spline.start();
        let mut turning = 0.0;
        for i in 0..n {
            let e0 = dense[i] - dense[(i + n - 1) % n];
            let e1 = dense[(i + 1) % n] - dense[i];
            let a = signed_angle(e0, e1);
            if a < -1e-9 {
                return Err(SupportError::InvalidSupport(format!("table is not convex near node {i}")));
            }
            turning += a;
        }
        if (turning - TAU).abs() > 1e-6 {
            return Err(SupportError::InvalidSupport("table is not a simple closed curve".into()));
        }
        Ok(Self::finish(SupportKind::Table(Table { spline, samples: dense, period })))
    }

    fn finish(kind: SupportKind) -> Self {
        let mut s = SupportCurve { kind, width: f64::INFINITY };
        if s.is_closed() {
            s.width = s.sweep_width();
        }
        s
    }

    pub fn kind(&self) -> &SupportKind {
        &self.kind
    }

    pub fn is_line(&self) -> bool {
        matches!(self.kind, SupportKind::Line { .. })
    }

    pub fn is_closed(&self) -> bool {
        !self.is_line()
    }

    /// Parameter period of closed supports.
    pub fn period(&self) -> Option<f64> {
        match &self.kind {
            SupportKind::Circle { .. } | SupportKind::Ellipse { .. } => Some(TAU),
            SupportKind::Table(t) => Some(t.period),
            SupportKind::Line { .. } => None,
        }
    }

    /// Minimum width d_Σ; [`SupportError::UnsupportedForLine`] for lines.
    pub fn minimum_width(&self) -> Result<f64, SupportError> {
        if self.is_line() {
            Err(SupportError::UnsupportedForLine)
        } else {
            Ok(self.width)
        }
    }

    /// Minimum width with the `+∞` convention for lines.
    pub fn width_or_infinity(&self) -> f64 {
        self.width
    }

    pub fn contact_tolerance(&self) -> f64 {
        if self.is_line() {
            CONTACT_TOLERANCE_FACTOR
        } else {
            CONTACT_TOLERANCE_FACTOR * self.width
        }
    }

    pub fn evaluate(&self, param: f64) -> SupportSample {
        match &self.kind {
            SupportKind::Circle { center, radius } => {
                let u = Vec2::from_angle(param);
                let tangent = u.perp();
                SupportSample { point: *center + u * *radius, tangent, inner_normal: tangent.perp(), curvature: 1.0 / radius }
            }
            SupportKind::Ellipse { center, a, b, rotation } => {
                let (s, c) = param.sin_cos();
                let rot = |v: Vec2| rotate(v, *rotation);
                let d = Vec2::new(-a * s, b * c);
                let speed = d.norm();
                let tangent = rot(d / speed);
                SupportSample {
                    point: *center + rot(Vec2::new(a * c, b * s)),
                    tangent,
                    inner_normal: tangent.perp(),
                    curvature: a * b / (speed * speed * speed),
                }
            }
            SupportKind::Table(t) => {
                let (p, d1, d2) = t.spline.eval_derivatives(param);
                let speed = d1.norm();
                let tangent = d1 / speed;
                SupportSample { point: p, tangent, inner_normal: tangent.perp(), curvature: d1.cross(d2) / (speed * speed * speed) }
            }
            SupportKind::Line { point, direction } => SupportSample {
                point: *point + *direction * param,
                tangent: *direction,
                inner_normal: direction.perp(),
                curvature: 0.0,
            },
        }
    }

    pub fn point(&self, param: f64) -> Vec2 {
        self.evaluate(param).point
    }

    /// Nearest point of Σ and its parameter (closed kinds: in `[0, period)`).
    pub fn project(&self, q: Vec2) -> Result<(f64, Vec2), SupportError> {
        if !q.is_finite() {
            return Err(SupportError::ProjectionDiverged);
        }
        let param = match &self.kind {
            SupportKind::Circle { center, .. } => {
                let d = q - *center;
                if d.norm() == 0.0 {
                    return Err(SupportError::ProjectionDiverged);
                }
                d.angle().rem_euclid(TAU)
            }
            SupportKind::Line { point, direction } => (q - *point).dot(*direction),
            SupportKind::Ellipse { center, a, b, rotation } => {
                let l = rotate(q - *center, -*rotation);
                let guess = (l.y / b).atan2(l.x / a);
                self.refine_projection(q, guess).unwrap_or_else(|| self.dense_projection(q)).rem_euclid(TAU)
            }
            SupportKind::Table(t) => {
                let (i, _) = t
                    .samples
                    .iter()
                    .enumerate()
                    .map(|(i, p)| (i, p.distance(q)))
                    .min_by(|x, y| x.1.total_cmp(&y.1))
                    .expect("table has samples");
                let guess = t.spline.knots()[i];
                self.refine_projection(q, guess).unwrap_or(guess).rem_euclid(t.period)
            }
        };
        if !param.is_finite() {
            return Err(SupportError::ProjectionDiverged);
        }
        Ok((param, self.point(param)))
    }

    /// Newton iteration on `⟨q − Σ(θ), Σ'(θ)⟩ = 0` with a finite-difference
    /// second derivative; `None` if it does not settle.
    fn refine_projection(&self, q: Vec2, guess: f64) -> Option<f64> {
        let g = |t: f64| {
            let s = self.evaluate(t);
            (q - s.point).dot(s.tangent)
        };
        let mut t = guess;
        for _ in 0..50 {
            let h = 1e-6;
            let (g0, gp, gm) = (g(t), g(t + h), g(t - h));
            let dg = (gp - gm) / (2.0 * h);
            if dg == 0.0 || !dg.is_finite() {
                return None;
            }
            let step = g0 / dg;
            t -= step.clamp(-0.5, 0.5);
            if step.abs() < 1e-15 * (1.0 + t.abs()) {
                return Some(t);
            }
        }
        (g(t).abs() < 1e-12).then_some(t)
    }

    fn dense_projection(&self, q: Vec2) -> f64 {
        let period = self.period().unwrap_or(TAU);
        let n = TABLE_MIN_SAMPLES;
        let best = (0..n)
            .map(|i| period * i as f64 / n as f64)
            .min_by(|x, y| self.point(*x).distance(q).total_cmp(&self.point(*y).distance(q)))
            .unwrap_or(0.0);
        self.refine_projection(q, best).unwrap_or(best)
    }

    /// Support point in the outward direction `u`: the point maximising ⟨p, u⟩.
    pub fn support_point(&self, u: Vec2) -> Vec2 {
        match &self.kind {
            SupportKind::Circle { center, radius } => *center + u * *radius,
            SupportKind::Ellipse { center, a, b, rotation } => {
                let l = rotate(u, -*rotation);
                let h = (a * a * l.x * l.x + b * b * l.y * l.y).sqrt();
                *center + rotate(Vec2::new(a * a * l.x / h, b * b * l.y / h), *rotation)
            }
            SupportKind::Table(t) => *t
                .samples
                .iter()
                .max_by(|p, q| p.dot(u).total_cmp(&q.dot(u)))
                .expect("table has samples"),
            SupportKind::Line { .. } => Vec2::new(f64::INFINITY, f64::INFINITY),
        }
    }

    /// Distance between the two supporting lines orthogonal to direction `phi`.
    pub fn width_in_direction(&self, phi: f64) -> f64 {
        let u = Vec2::from_angle(phi);
        (self.support_point(u) - self.support_point(-u)).dot(u)
    }

    fn sweep_width(&self) -> f64 {
        let step = PI / WIDTH_SWEEP as f64;
        let (mut best, mut at) = (f64::INFINITY, 0.0);
        for i in 0..WIDTH_SWEEP {
            let w = self.width_in_direction(i as f64 * step);
            if w < best {
                best = w;
                at = i as f64 * step;
            }
        }
        // golden-section refinement inside the bracketing grid cells
        let (mut lo, mut hi) = (at - step, at + step);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let (mut x1, mut x2) = (hi - g * (hi - lo), lo + g * (hi - lo));
        let (mut f1, mut f2) = (self.width_in_direction(x1), self.width_in_direction(x2));
        for _ in 0..60 {
            if f1 < f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - g * (hi - lo);
                f1 = self.width_in_direction(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + g * (hi - lo);
                f2 = self.width_in_direction(x2);
            }
        }
        best.min(f1).min(f2)
    }

    /// Angle of the inner normal at `param`.
    pub fn normal_angle(&self, param: f64) -> f64 {
        self.evaluate(param).inner_normal.angle()
    }

    /// Uniformly scaled copy (about the origin).
    pub fn scaled(&self, factor: f64) -> Result<Self, SupportError> {
        match &self.kind {
            SupportKind::Circle { center, radius } => Self::circle(*center * factor, radius * factor),
            SupportKind::Ellipse { center, a, b, rotation } => Self::ellipse(*center * factor, a * factor, b * factor, *rotation),
            SupportKind::Table(t) => Self::table(&t.samples.iter().map(|p| *p * factor).collect::<Vec<_>>()),
            SupportKind::Line { point, direction } => Self::line(*point * factor, *direction),
        }
    }
}

pub(crate) fn rotate(v: Vec2, angle: f64) -> Vec2 {
    let (s, c) = angle.sin_cos();
    Vec2::new(c * v.x - s * v.y, s * v.x + c * v.y)
}

fn chord_spline(nodes: &[Vec2]) -> Result<CubicSpline2, SupportError> {
    let n = nodes.len();
    let mut s = Vec::with_capacity(n);
    let mut acc = 0.0;
    for i in 0..n {
        s.push(acc);
        let d = nodes[i].distance(nodes[(i + 1) % n]);
        if !(d > 0.0) {
            return Err(SupportError::InvalidSupport(format!("repeated table node {i}")));
        }
        acc += d;
    }
    CubicSpline2::periodic(s, nodes.to_vec(), acc)
        .ok_or_else(|| SupportError::InvalidSupport("table spline is singular".into()))
}
