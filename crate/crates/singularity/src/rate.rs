use apcsf_flow::{fit_singular_time, MonitorRecord};
use serde::Serialize;

use crate::SingularityError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SingularTimeEstimate {
    pub t_est: f64,
    pub uncertainty: f64,
    /// Fitted `s` in `1/κ_max² ≈ s·(T − t)`.
    pub slope: f64,
}

fn growth(kappa: &[f64]) -> f64 {
    let first = kappa.iter().copied().fold(f64::INFINITY, f64::min);
    kappa.last().map_or(1.0, |k| k / first)
}

/// Fits the singular time from a `(t, κ_max)` series.
pub fn estimate_from_series(times: &[f64], kappa_max: &[f64]) -> Result<SingularTimeEstimate, SingularityError> {
    fit_singular_time(times, kappa_max)
        .map(|f| SingularTimeEstimate { t_est: f.t_est, uncertainty: f.uncertainty, slope: f.slope })
        .ok_or_else(|| SingularityError::InsufficientBlowup { growth: growth(kappa_max) })
}

pub fn estimate_singular_time(monitors: &[MonitorRecord]) -> Result<SingularTimeEstimate, SingularityError> {
    let t: Vec<f64> = monitors.iter().map(|m| m.time).collect();
    let k: Vec<f64> = monitors.iter().map(|m| m.kappa_max).collect();
    estimate_from_series(&t, &k)
}

/// Knobs of the tail analyses.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TailConfig {
    /// Samples skipped at the start of a run.
    pub burn_in: usize,
    /// Samples with `T − t ≤ resolution_sigmas·σ_T` are not resolved.
    pub resolution_sigmas: f64,
    pub type2_growth_factor: f64,
    /// Relative band around the median inside which r(t) counts as constant.
    pub type1_band: f64,
}

impl Default for TailConfig {
    fn default() -> Self {
        TailConfig { burn_in: 20, resolution_sigmas: 3.0, type2_growth_factor: 4.0, type1_band: 0.2 }
    }
}

/// Indices of the resolved tail: after the burn-in and while `T − t` exceeds
/// the resolution limit of the estimate.
pub fn resolved_tail(times: &[f64], estimate: &SingularTimeEstimate, config: &TailConfig) -> std::ops::Range<usize> {
    let limit = config.resolution_sigmas * estimate.uncertainty;
    let start = config.burn_in.min(times.len());
    let end = times.iter().rposition(|t| estimate.t_est - t > limit).map_or(start, |i| (i + 1).max(start));
    start..end
}

/// `(t, κ_max²(t)·(T − t))` over the resolved tail.
pub fn rate_series(monitors: &[MonitorRecord], estimate: &SingularTimeEstimate, config: &TailConfig) -> Vec<(f64, f64)> {
    let t: Vec<f64> = monitors.iter().map(|m| m.time).collect();
    monitors[resolved_tail(&t, estimate, config)]
        .iter()
        .map(|m| (m.time, m.kappa_max * m.kappa_max * (estimate.t_est - m.time)))
        .collect()
}

/// Smallest value of a rate series (`+∞` when empty).
pub fn rate_floor(series: &[(f64, f64)]) -> f64 {
    series.iter().map(|p| p.1).fold(f64::INFINITY, f64::min)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TypeVerdict {
    TypeI,
    TypeII,
    Undetermined,
}

/// Classifies a rate series `r(t)`. Type II: the maximum is reached in the
/// last quarter of the series and is at least `type2_growth_factor` times the
/// first value. Type I: every value lies within `type1_band` of the median.
pub fn classify_rate_series(series: &[(f64, f64)], config: &TailConfig) -> TypeVerdict {
    if series.len() < 4 {
        return TypeVerdict::Undetermined;
    }
    let r: Vec<f64> = series.iter().map(|p| p.1).collect();
    let (argmax, max) = r.iter().copied().enumerate().fold((0, f64::NEG_INFINITY), |a, (i, v)| if v > a.1 { (i, v) } else { a });
    if max >= config.type2_growth_factor * r[0] && 4 * argmax >= 3 * (r.len() - 1) {
        return TypeVerdict::TypeII;
    }
    let mut sorted = r.clone();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[sorted.len() / 2];
    if r.iter().all(|v| (v - median).abs() <= config.type1_band * median) {
        return TypeVerdict::TypeI;
    }
    TypeVerdict::Undetermined
}

pub fn classify_type(monitors: &[MonitorRecord], estimate: &SingularTimeEstimate, config: &TailConfig) -> TypeVerdict {
    classify_rate_series(&rate_series(monitors, estimate, config), config)
}

/// Outcome of the L² rate check on `q(t) = ∫κ² ds·(T − t)^{1/2}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct L2RateCheck {
    pub series: Vec<(f64, f64)>,
    /// Largest q in each decade of `T − t` across the tail, latest decade last.
    pub decade_maxima: Vec<(f64, f64)>,
    /// Least value along the decade maxima.
    pub constant: f64,
    /// Log-log slope of the decade maxima against `T − t`; ½ for bounded ∫κ², 0 at the critical rate.
    pub slope: f64,
    pub holds: bool,
}

/// A decaying subsequence has slope near ½ (∫κ² bounded); any slope below
/// this counts as staying above a positive constant.
pub const L2_SLOPE_LIMIT: f64 = 0.25;

pub fn l2_rate_check_series(times: &[f64], kappa_sq: &[f64], t_est: f64) -> L2RateCheck {
    let series: Vec<(f64, f64)> =
        times.iter().zip(kappa_sq).filter(|(t, _)| t_est - *t > 0.0).map(|(&t, &q)| (t, q * (t_est - t).sqrt())).collect();
    let mut decades: Vec<(i64, f64, f64)> = Vec::new();
    for &(t, q) in &series {
        let dec = (t_est - t).log10().floor() as i64;
        match decades.iter_mut().find(|d| d.0 == dec) {
            Some(d) if q > d.2 => {
                d.1 = t;
                d.2 = q;
            }
            Some(_) => {}
            None => decades.push((dec, t, q)),
        }
    }
    decades.sort_by(|a, b| b.0.cmp(&a.0));
    let decade_maxima: Vec<(f64, f64)> = decades.iter().map(|d| (d.1, d.2)).collect();
    let constant = decade_maxima.iter().map(|d| d.1).fold(f64::INFINITY, f64::min);
    let slope = if decade_maxima.len() >= 2 {
        let pts: Vec<(f64, f64)> = decade_maxima.iter().map(|&(t, q)| ((t_est - t).ln(), q.ln())).collect();
        let n = pts.len() as f64;
        let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        sxy / sxx
    } else {
        f64::NAN
    };
    let holds = decade_maxima.len() >= 2 && constant > 0.0 && constant.is_finite() && slope < L2_SLOPE_LIMIT;
    L2RateCheck { series, decade_maxima, constant, slope, holds }
}

/// Runs the L² check over the resolved tail of a run.
pub fn l2_rate_check(monitors: &[MonitorRecord], estimate: &SingularTimeEstimate, config: &TailConfig) -> L2RateCheck {
    let t: Vec<f64> = monitors.iter().map(|m| m.time).collect();
    let tail = &monitors[resolved_tail(&t, estimate, config)];
    let t: Vec<f64> = tail.iter().map(|m| m.time).collect();
    let q: Vec<f64> = tail.iter().map(|m| m.kappa_sq_integral).collect();
    l2_rate_check_series(&t, &q, estimate.t_est)
}
