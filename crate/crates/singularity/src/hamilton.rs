use apcsf_flow::{discretize, Snapshot};
use apcsf_geometry::OpenCurve;
use apcsf_support::{AnchoredCurve, SupportCurve};
use serde::Serialize;

use crate::grim::{ContactLine, RescaledCurve};
use crate::SingularityError;

/// One rescaled curve `Q(γ(·, t) − γ(p, t_j))` at rescaled time `τ = Q²(t − t_j)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RescaledFrame {
    pub time: f64,
    pub tau: f64,
    /// Index of the stored snapshot this frame came from.
    pub snapshot: usize,
    pub curve: RescaledCurve,
}

/// The selection for one `j` of the schedule, with its neighbouring frames.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HamiltonStage {
    /// `1/j`.
    pub j_inverse: f64,
    /// `Q_j = |κ|(p_j, t_j)`.
    pub scale: f64,
    /// Selected node `p_j`.
    pub node: usize,
    pub frame: RescaledFrame,
    pub before: Option<RescaledFrame>,
    pub after: Option<RescaledFrame>,
}

/// Minimum growth of the stored κ_max before rescaling is attempted.
const MIN_GROWTH: f64 = 10.0;

struct Sample {
    time: f64,
    curvature: Vec<f64>,
    anchored: AnchoredCurve,
}

fn samples(snapshots: &[Snapshot], support: &SupportCurve, t_est: f64) -> Result<Vec<Sample>, SingularityError> {
    snapshots
        .iter()
        .filter(|s| s.time < t_est)
        .map(|s| {
            let anchored = AnchoredCurve::from_parts(OpenCurve::new(s.nodes.clone())?, support.clone(), s.endpoint_params);
            let curvature = discretize(&anchored)?.curvature;
            Ok(Sample { time: s.time, curvature, anchored })
        })
        .collect()
}

fn rescale(sample: &Sample, index: usize, center: apcsf_geometry::Vec2, q: f64, t_j: f64) -> RescaledFrame {
    let nodes = sample.anchored.curve().nodes().iter().map(|&x| (x - center) * q).collect();
    let support = sample.anchored.support();
    let params = sample.anchored.endpoint_params();
    let ends = [sample.anchored.curve().first(), sample.anchored.curve().last()];
    let contacts = [0, 1].map(|e| {
        Some(ContactLine { point: (ends[e] - center) * q, direction: support.evaluate(params[e]).tangent })
    });
    RescaledFrame {
        time: sample.time,
        tau: q * q * (sample.time - t_j),
        snapshot: index,
        curve: RescaledCurve { nodes, curvature: sample.curvature.iter().map(|k| k / q).collect(), contacts },
    }
}

/// Hamilton's rescaling along the schedule `1/j = T·2^{−k}`, k = 1, 2, …: for
/// each j the stored sample maximizing `κ²(p, t)(T − 1/j − t)` is selected and
/// the curve is rescaled by `Q_j = |κ(p_j, t_j)|` about `γ(p_j, t_j)`. The
/// stored snapshots nearest to rescaled times ±1 are emitted as neighbours
/// when one lies within a factor two of it. The schedule ends once every
/// snapshot is a candidate; repeated selections are dropped.
pub fn hamilton_blowup(snapshots: &[Snapshot], support: &SupportCurve, t_est: f64) -> Result<Vec<HamiltonStage>, SingularityError> {
    let samples = samples(snapshots, support, t_est)?;
    let kmax = |s: &Sample| s.curvature.iter().fold(0.0f64, |m, k| m.max(k.abs()));
    let (Some(first), Some(last)) = (samples.first(), samples.last()) else {
        return Err(SingularityError::InsufficientResolution("no snapshot before the singular time".into()));
    };
    if !(kmax(last) >= MIN_GROWTH * kmax(first)) {
        return Err(SingularityError::InsufficientResolution(format!(
            "stored curvature grew only {:.2}×",
            kmax(last) / kmax(first)
        )));
    }
    let horizon = t_est - last.time;
    let mut stages: Vec<HamiltonStage> = Vec::new();
    let mut k = 1;
    loop {
        let j_inverse = t_est * 0.5f64.powi(k);
        k += 1;
        let mut best: Option<(f64, usize, usize)> = None;
        for (si, s) in samples.iter().enumerate() {
            let gap = t_est - j_inverse - s.time;
            if gap <= 0.0 {
                continue;
            }
            for (pi, kappa) in s.curvature.iter().enumerate() {
                let v = kappa * kappa * gap;
                if best.map_or(true, |b| v > b.0) {
                    best = Some((v, si, pi));
                }
            }
        }
        if let Some((_, si, pi)) = best {
            if stages.last().map_or(true, |st| (st.frame.snapshot, st.node) != (si, pi)) {
                let s = &samples[si];
                let q = s.curvature[pi].abs();
                let center = s.anchored.curve().nodes()[pi];
                let neighbour = |target: f64| {
                    samples
                        .iter()
                        .enumerate()
                        .map(|(i, other)| (i, q * q * (other.time - s.time)))
                        .filter(|(_, tau)| tau / target >= 0.5 && tau / target <= 2.0)
                        .min_by(|a, b| (a.1 - target).abs().total_cmp(&(b.1 - target).abs()))
                        .map(|(i, _)| rescale(&samples[i], i, center, q, s.time))
                };
                stages.push(HamiltonStage {
                    j_inverse,
                    scale: q,
                    node: pi,
                    frame: rescale(s, si, center, q, s.time),
                    before: neighbour(-1.0),
                    after: neighbour(1.0),
                });
            }
        }
        if j_inverse < 0.5 * horizon || k > 200 {
            break;
        }
    }
    if stages.is_empty() {
        return Err(SingularityError::InsufficientResolution("no sample selected".into()));
    }
    Ok(stages)
}
