use std::f64::consts::{PI, TAU};

use apcsf_geometry::{signed_area_of, ClosedCurve, Vec2};

use crate::support::ANTIPODAL_TOLERANCE;
use crate::{AnchoredCurve, SupportCurve, SupportError};

/// Maximal normal turning between consecutive samples of a boundary arc.
const ARC_SAMPLE_TURN: f64 = 2e-4;
const ARC_MAX_SAMPLES: usize = 40_000;

/// The short piece σ of Σ running from γ(b) to γ(a).
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryArc {
    pub start_param: f64,
    pub end_param: f64,
    /// Total rotation of the inner normal along the arc, in [0, π).
    pub normal_turning: f64,
    /// True if the arc runs in the direction of increasing parameter.
    pub forward: bool,
    pub samples: Vec<Vec2>,
    pub degenerate: bool,
}

impl BoundaryArc {
    pub fn length(&self) -> f64 {
        self.samples.windows(2).map(|w| w[0].distance(w[1])).sum()
    }
}

impl SupportCurve {
    /// The component of Σ between the two parameters whose inner normal turns
    /// by less than π, oriented from `from_param` (γ(b)) to `to_param` (γ(a)).
    pub fn short_piece(&self, from_param: f64, to_param: f64) -> Result<BoundaryArc, SupportError> {
        let Some(period) = self.period() else {
            let (p, q) = (self.point(from_param), self.point(to_param));
            let degenerate = p.distance(q) <= 1e-12 * (1.0 + p.norm());
            return Ok(BoundaryArc {
                start_param: from_param,
                end_param: to_param,
                normal_turning: 0.0,
                forward: to_param >= from_param,
                samples: if degenerate { vec![p] } else { vec![p, q] },
                degenerate,
            });
        };
        let delta = (self.normal_angle(to_param) - self.normal_angle(from_param)).rem_euclid(TAU);
        let p = self.point(from_param);
        if delta.min(TAU - delta) < 1e-14 && p.distance(self.point(to_param)) < 1e-12 * self.width_or_infinity() {
            return Ok(BoundaryArc {
                start_param: from_param,
                end_param: to_param,
                normal_turning: 0.0,
                forward: true,
                samples: vec![p],
                degenerate: true,
            });
        }
        if (delta - PI).abs() < ANTIPODAL_TOLERANCE {
            return Err(SupportError::AntipodalEndpoints);
        }
        let forward = delta < PI;
        let turning = if forward { delta } else { TAU - delta };
        let span = if forward {
            (to_param - from_param).rem_euclid(period)
        } else {
            -(from_param - to_param).rem_euclid(period)
        };
        let resolution = turning.max(span.abs() * TAU / period);
        let k = ((resolution / ARC_SAMPLE_TURN).ceil() as usize).clamp(1, ARC_MAX_SAMPLES);
        let mut samples: Vec<Vec2> = (0..=k).map(|i| self.point(from_param + span * i as f64 / k as f64)).collect();
        samples[k] = self.point(to_param);
        Ok(BoundaryArc {
            start_param: from_param,
            end_param: to_param,
            normal_turning: turning,
            forward,
            samples,
            degenerate: false,
        })
    }
}

fn check_arc(anchored: &AnchoredCurve, arc: &BoundaryArc) -> Result<(), SupportError> {
    let c = anchored.curve();
    let first = arc.samples[0];
    let last = arc.samples[arc.samples.len() - 1];
    let distance = first.distance(c.last()).max(last.distance(c.first()));
    if distance > anchored.support().contact_tolerance() {
        return Err(SupportError::MismatchedEndpoints { distance });
    }
    Ok(())
}

/// Node list of the closed curve γ + σ: the curve nodes followed by the
/// interior samples of the arc (its ends coincide with γ(b) and γ(a)).
fn closing_nodes(anchored: &AnchoredCurve, arc: &BoundaryArc) -> Vec<Vec2> {
    let mut nodes = anchored.curve().nodes().to_vec();
    if arc.samples.len() > 2 {
        nodes.extend_from_slice(&arc.samples[1..arc.samples.len() - 1]);
    }
    nodes
}

/// Oriented area A(γ + σ): shoelace sum over the curve followed by the arc.
pub fn enclosed_area(anchored: &AnchoredCurve, arc: &BoundaryArc) -> Result<f64, SupportError> {
    check_arc(anchored, arc)?;
    Ok(signed_area_of(&closing_nodes(anchored, arc)))
}

/// The concatenation γ + σ as a closed curve.
pub fn closing_curve(anchored: &AnchoredCurve, arc: &BoundaryArc) -> Result<ClosedCurve, SupportError> {
    check_arc(anchored, arc)?;
    Ok(ClosedCurve::smooth(closing_nodes(anchored, arc))?)
}
