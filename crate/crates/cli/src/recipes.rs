//! Initial curves for the four examples, built by shooting.
//!
//! Each example is mirror symmetric. Half of it is integrated from the apex
//! `(0, y0)` (heading along +x) with a prescribed curvature profile κ(s); the
//! apex height and one profile parameter are found by Newton's method so that
//! the half ends on Σ heading straight at the centre. Mirroring gives a curve
//! that meets the circle perpendicularly at both ends, from outside.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use apcsf_flow::count_self_intersections;
use apcsf_geometry::{OpenCurve, Vec2};
use apcsf_support::{AnchoredCurve, SupportCurve, SupportKind};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Samples of the half profile.
const HALF_SAMPLES: usize = 20001;
/// Nodes of the emitted curve (runs resample to their own node count).
pub const RECIPE_NODES: usize = 1000;
/// Inequalities are required to hold with this relative margin.
pub const MARGIN: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExampleName {
    One,
    Two,
    Three,
    Four,
}

impl ExampleName {
    pub const ALL: [ExampleName; 4] = [ExampleName::One, ExampleName::Two, ExampleName::Three, ExampleName::Four];

    pub fn as_str(self) -> &'static str {
        match self {
            ExampleName::One => "one",
            ExampleName::Two => "two",
            ExampleName::Three => "three",
            ExampleName::Four => "four",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            ExampleName::One => "outward loop with a small inner loop at the top; l = 2, A > pi/2, L < 4pi/3",
            ExampleName::Two => "embedded bulb hanging down with the endpoints close together; l = 2, A > pi/2",
            ExampleName::Three => "convex curve whose region with the short piece has negative area",
            ExampleName::Four => "like one with the small loop reversed; total curvature in (-2pi, 0)",
        }
    }
}

impl fmt::Display for ExampleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExampleName {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.to_ascii_lowercase().as_str() {
            "one" | "1" => Ok(ExampleName::One),
            "two" | "2" => Ok(ExampleName::Two),
            "three" | "3" => Ok(ExampleName::Three),
            "four" | "4" => Ok(ExampleName::Four),
            _ => Err(CliError::Usage(format!("unknown example `{s}` (expected one, two, three, four)"))),
        }
    }
}

/// A recipe: curvature profile shape, the tunable knob and the inequalities it
/// must meet.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExampleRecipe {
    pub name: ExampleName,
    pub support_radius: f64,
    /// Profile parameters (meaning depends on the example, see [`profile`]).
    pub shape: [f64; 4],
    /// Initial guess for (apex height above the circle, free curvature).
    pub guess: [f64; 2],
    pub targets: Vec<Target>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    /// L₀ ≤ (1 − margin)·4π/3.
    LengthBelowFourThirdsPi,
    /// L₀ ≤ (1 − margin)·d_Σ.
    LengthBelowWidth,
    /// ∫κ ds ∈ ((2l−2)π, 2lπ) with the given l, at least `margin·π` inside.
    Bracket(i64),
    /// A₀ ≥ (1 + margin)·π/2.
    AreaAboveHalfPi,
    /// A₀ ≤ −margin·(|A| scale): strictly negative.
    NegativeArea,
    /// min κ > 0.
    PositiveCurvature,
    /// No self-intersections.
    Embedded,
}

/// Measured quantities of a generated curve.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RecipeReport {
    pub length: f64,
    pub width: f64,
    pub total_curvature: f64,
    pub area: f64,
    pub kappa_min: f64,
    pub kappa_max: f64,
    pub self_intersections: usize,
    pub apex_height: f64,
    pub free_curvature: f64,
}

fn sstep(u: f64) -> f64 {
    0.5 * (1.0 - u.tanh())
}

fn bump(s: f64, s1: f64, s2: f64, w: f64) -> f64 {
    sstep((s1 - s) / w) * sstep((s - s2) / w)
}

/// Curvature profile κ(s) of the half curve for free parameter `k`, and the
/// half length.
fn profile(name: ExampleName, shape: [f64; 4], k: f64) -> (Box<dyn Fn(f64) -> f64>, f64) {
    match name {
        // shape = [loop radius ρ, half length, transition width, -]
        ExampleName::One | ExampleName::Four => {
            let [rho, half, w, _] = shape;
            let lk = if name == ExampleName::One { 1.0 / rho } else { -1.0 / rho };
            let sl = PI * rho;
            (Box::new(move |s| k + (lk - k) * sstep((s - sl) / w)), half)
        }
        // shape = [arch length before the turn, turn radius ρ, turn angle, leg length]
        ExampleName::Two | ExampleName::Three => {
            let [top, rho, turn, leg] = shape;
            let s2 = top + rho * turn;
            let w = 0.2 * rho;
            (Box::new(move |s| k + (1.0 / rho - k) * bump(s, top, s2, w)), s2 + leg)
        }
    }
}

struct Half {
    pos: Vec<Vec2>,
    heading: Vec<f64>,
    kappa: Vec<f64>,
    ds: f64,
}

fn integrate_half(kappa: &dyn Fn(f64) -> f64, half: f64, y0: f64) -> Half {
    let m = HALF_SAMPLES;
    let ds = half / (m - 1) as f64;
    let k: Vec<f64> = (0..m).map(|i| kappa(i as f64 * ds)).collect();
    let mut th = vec![0.0; m];
    let mut pos = vec![Vec2::new(0.0, y0); m];
    for i in 1..m {
        th[i] = th[i - 1] + 0.5 * ds * (k[i] + k[i - 1]);
        let step = (Vec2::from_angle(th[i]) + Vec2::from_angle(th[i - 1])) * (0.5 * ds);
        pos[i] = pos[i - 1] + step;
    }
    Half { pos, heading: th, kappa: k, ds }
}

fn wrap(a: f64) -> f64 {
    (a + PI).rem_euclid(2.0 * PI) - PI
}

/// End conditions relative to a circle of radius `r` centred at the origin:
/// on the circle, heading at the centre.
fn shooting_residual(h: &Half, r: f64) -> [f64; 2] {
    let e = *h.pos.last().unwrap();
    let th = *h.heading.last().unwrap();
    [e.norm() - r, wrap(th - (e.angle() + PI))]
}

fn shoot(name: ExampleName, shape: [f64; 4], r: f64, guess: [f64; 2]) -> Option<(Half, [f64; 2])> {
    let eval = |p: [f64; 2]| {
        let (kf, half) = profile(name, shape, p[1]);
        let h = integrate_half(&*kf, half, p[0]);
        let res = shooting_residual(&h, r);
        (h, res)
    };
    let mut p = [r + guess[0], guess[1]];
    let (_, mut res) = eval(p);
    for _ in 0..60 {
        let norm = res[0].hypot(res[1]);
        if norm < 1e-12 {
            break;
        }
        let eps = 1e-7;
        let (_, r0) = eval([p[0] + eps, p[1]]);
        let (_, r1) = eval([p[0], p[1] + eps]);
        let j = [[(r0[0] - res[0]) / eps, (r1[0] - res[0]) / eps], [(r0[1] - res[1]) / eps, (r1[1] - res[1]) / eps]];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if !(det.abs() > 1e-300) {
            return None;
        }
        let dp = [(j[1][1] * res[0] - j[0][1] * res[1]) / det, (-j[1][0] * res[0] + j[0][0] * res[1]) / det];
        let mut lambda = 1.0;
        loop {
            let trial = [p[0] - lambda * dp[0], p[1] - lambda * dp[1]];
            let (_, rt) = eval(trial);
            if rt[0].hypot(rt[1]) < norm || lambda < 1e-4 {
                p = trial;
                res = rt;
                break;
            }
            lambda *= 0.5;
        }
    }
    if !(res[0].hypot(res[1]) < 1e-9) {
        return None;
    }
    Some((eval(p).0, p))
}

/// Mirrors the half (apex at index 0) into a curve from `a` (left) to `b`.
fn mirror(h: &Half) -> (Vec<Vec2>, Vec<f64>) {
    let mut pos: Vec<Vec2> = h.pos.iter().rev().map(|p| Vec2::new(-p.x, p.y)).collect();
    pos.extend_from_slice(&h.pos[1..]);
    let mut kappa: Vec<f64> = h.kappa.iter().rev().copied().collect();
    kappa.extend_from_slice(&h.kappa[1..]);
    (pos, kappa)
}

/// Resamples the dense curve (uniform arclength step `ds`) to `count` nodes
/// with density ∝ 1/L + ½|κ|.
fn resample(pos: &[Vec2], kappa: &[f64], ds: f64, count: usize) -> Vec<Vec2> {
    let length = ds * (pos.len() - 1) as f64;
    let mut w = vec![0.0];
    for i in 1..pos.len() {
        let d = 2.0 / length + 0.5 * (kappa[i].abs() + kappa[i - 1].abs());
        w.push(w[i - 1] + 0.5 * ds * d);
    }
    let total = *w.last().unwrap();
    let mut j = 0;
    (0..count)
        .map(|i| {
            let target = total * i as f64 / (count - 1) as f64;
            while j + 2 < w.len() && w[j + 1] < target {
                j += 1;
            }
            let u = ((target - w[j]) / (w[j + 1] - w[j])).clamp(0.0, 1.0);
            pos[j] + (pos[j + 1] - pos[j]) * u
        })
        .collect()
}

impl ExampleRecipe {
    /// The nominal recipe on a circle of the given radius (tuned for radius 4).
    pub fn nominal(name: ExampleName, support_radius: f64) -> Self {
        use Target::*;
        let (shape, guess, targets) = match name {
            ExampleName::One => (
                [0.06, 1.9, 0.02, 0.0],
                [0.8, 1.0],
                vec![LengthBelowFourThirdsPi, LengthBelowWidth, Bracket(2), AreaAboveHalfPi],
            ),
            ExampleName::Two => (
                [1.62, 0.07, 3.1, 0.05],
                [-1.2, 1.0],
                vec![LengthBelowFourThirdsPi, LengthBelowWidth, Bracket(2), AreaAboveHalfPi, Embedded],
            ),
            ExampleName::Three => {
                ([0.7, 0.015, 4.5, 0.7], [0.3, 0.05], vec![LengthBelowWidth, Bracket(2), NegativeArea, PositiveCurvature])
            }
            ExampleName::Four => ([0.06, 1.9, 0.02, 0.0], [0.9, 1.0], vec![LengthBelowWidth, Bracket(0), AreaAboveHalfPi]),
        };
        ExampleRecipe { name, support_radius, shape, guess, targets }
    }

    /// Index of the shape parameter that is tuned (it controls the length).
    fn knob(&self) -> usize {
        match self.name {
            ExampleName::One | ExampleName::Four => 1,
            ExampleName::Two | ExampleName::Three => 3,
        }
    }

    fn build(&self, shape: [f64; 4], center: Vec2, support: &SupportCurve) -> Result<(AnchoredCurve, RecipeReport), String> {
        let (half, p) = shoot(self.name, shape, self.support_radius, self.guess).ok_or("shooting did not converge")?;
        let (pos, kappa) = mirror(&half);
        let nodes: Vec<Vec2> = resample(&pos, &kappa, half.ds, RECIPE_NODES).into_iter().map(|q| q + center).collect();
        let curve = OpenCurve::new(nodes).map_err(|e| e.to_string())?;
        let anchored = AnchoredCurve::anchor(curve, support.clone()).map_err(|e| e.to_string())?;
        let report = RecipeReport {
            length: anchored.curve().length(),
            width: support.width_or_infinity(),
            total_curvature: anchored.total_curvature(),
            area: anchored.enclosed_area().map_err(|e| e.to_string())?,
            kappa_min: kappa.iter().copied().fold(f64::INFINITY, f64::min),
            kappa_max: kappa.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            self_intersections: count_self_intersections(anchored.curve().nodes()),
            apex_height: p[0],
            free_curvature: p[1],
        };
        Ok((anchored, report))
    }

    /// Which targets fail for the measured report.
    pub fn failures(&self, r: &RecipeReport) -> Vec<Target> {
        let m = MARGIN;
        self.targets
            .iter()
            .copied()
            .filter(|t| match *t {
                Target::LengthBelowFourThirdsPi => !(r.length <= (1.0 - m) * 4.0 * PI / 3.0),
                Target::LengthBelowWidth => !(r.length <= (1.0 - m) * r.width),
                Target::Bracket(l) => {
                    let lo = (2 * l - 2) as f64 * PI + m * PI;
                    let hi = (2 * l) as f64 * PI - m * PI;
                    !(r.total_curvature > lo && r.total_curvature < hi)
                }
                Target::AreaAboveHalfPi => !(r.area >= (1.0 + m) * PI / 2.0),
                Target::NegativeArea => !(r.area < 0.0),
                Target::PositiveCurvature => !(r.kappa_min > 0.0),
                Target::Embedded => r.self_intersections != 0,
            })
            .collect()
    }

    /// Builds the curve. If a target fails at the nominal shape, the knob
    /// (a length parameter) is bisected downward for the largest value that
    /// meets the length targets, and all targets are re-checked.
    pub fn generate(&self, support: &SupportCurve) -> Result<(AnchoredCurve, RecipeReport), CliError> {
        let infeasible = |why: String| CliError::RecipeInfeasible { example: self.name.to_string(), reason: why };
        let center = match support.kind() {
            SupportKind::Circle { center, radius } if (*radius - self.support_radius).abs() <= 1e-12 * radius => *center,
            SupportKind::Circle { .. } => return Err(infeasible("recipe radius differs from the support radius".into())),
            _ => return Err(infeasible("example recipes are built for circle supports".into())),
        };
        let attempt = |shape: [f64; 4]| self.build(shape, center, support);
        let (curve, report) = attempt(self.shape).map_err(&infeasible)?;
        let fails = self.failures(&report);
        if fails.is_empty() {
            return Ok((curve, report));
        }
        let k = self.knob();
        let length_ok = |r: &RecipeReport| {
            !self.failures(r).iter().any(|t| matches!(t, Target::LengthBelowFourThirdsPi | Target::LengthBelowWidth))
        };
        let (mut lo, mut hi) = (0.0, self.shape[k]);
        let mut best: Option<(AnchoredCurve, RecipeReport)> = None;
        for _ in 0..30 {
            let mid = 0.5 * (lo + hi);
            let mut shape = self.shape;
            shape[k] = mid;
            match attempt(shape) {
                Ok((c, r)) if length_ok(&r) => {
                    lo = mid;
                    best = Some((c, r));
                }
                _ => hi = mid,
            }
        }
        match best {
            Some((c, r)) if self.failures(&r).is_empty() => Ok((c, r)),
            Some((_, r)) => Err(infeasible(format!("targets {:?} fail after tuning", self.failures(&r)))),
            None => Err(infeasible(format!("targets {fails:?} fail and tuning found no admissible curve"))),
        }
    }
}

/// The example on the default support, a circle of radius 4 (d_Σ = 8).
pub fn default_support() -> SupportCurve {
    SupportCurve::circle(Vec2::ZERO, 4.0).expect("valid circle")
}

/// Generates an example curve on `support` (a circle).
pub fn generate_example_on(name: ExampleName, support: &SupportCurve) -> Result<(AnchoredCurve, RecipeReport), CliError> {
    let radius = match support.kind() {
        SupportKind::Circle { radius, .. } => *radius,
        _ => 4.0,
    };
    ExampleRecipe::nominal(name, radius).generate(support)
}

/// Generates an example curve on the default support.
pub fn generate_example(name: ExampleName) -> Result<AnchoredCurve, CliError> {
    generate_example_on(name, &default_support()).map(|(c, _)| c)
}
