use serde::{Deserialize, Serialize};

use crate::FlowError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Explicit,
    SemiImplicit,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Redistribution {
    None,
    EveryKSteps(usize),
}

/// Integration parameters. `kappa_stop = None` means
/// `max(10³/L₀, kappa_stop_factor·κ_max(0))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FlowConfig {
    pub node_count: usize,
    /// Largest step ever taken (also the first step if the rule allows it).
    pub dt_initial: f64,
    pub dt_min: f64,
    /// `dt = dt_safety/κ_max²` (semi-implicit) or `dt_safety·h²/max(1, κ_max²h²)` (explicit).
    pub dt_safety: f64,
    pub t_end: f64,
    pub kappa_stop: Option<f64>,
    pub kappa_stop_factor: f64,
    pub redistribution: Redistribution,
    /// Node density is proportional to `1/L + redistribution_weight·|κ|`;
    /// zero gives uniform arclength.
    pub redistribution_weight: f64,
    pub scheme: Scheme,
    /// Store a snapshot whenever κ_max grew by this factor since the last one.
    pub snapshot_growth: f64,
    /// Extra times at which the run lands exactly and stores a snapshot.
    pub snapshot_times: Vec<f64>,
    pub max_steps: usize,
    /// Refuse to start unless L₀ < d_Σ.
    pub require_short: bool,
}

impl Default for FlowConfig {
    fn default() -> Self {
        FlowConfig {
            node_count: 400,
            dt_initial: 1e-3,
            dt_min: 1e-12,
            dt_safety: 0.02,
            t_end: 1.0,
            kappa_stop: None,
            kappa_stop_factor: 500.0,
            redistribution: Redistribution::EveryKSteps(5),
            redistribution_weight: 0.5,
            scheme: Scheme::SemiImplicit,
            snapshot_growth: 1.1,
            snapshot_times: Vec::new(),
            max_steps: 5_000_000,
            require_short: false,
        }
    }
}

impl FlowConfig {
    /// Settings for resolving a singularity: small steps relative to 1/κ², a
    /// floor low enough to reach κ ≈ 3000·κ_max(0), and a stop there.
    pub fn blowup() -> Self {
        FlowConfig {
            dt_initial: 1e-4,
            dt_min: 1e-14,
            dt_safety: 0.002,
            t_end: 50.0,
            kappa_stop_factor: 3000.0,
            ..FlowConfig::default()
        }
    }

    pub fn validate(&self) -> Result<(), FlowError> {
        let bad = |m: &str| Err(FlowError::InvalidConfig(m.into()));
        if self.node_count < 8 {
            return bad("node_count must be at least 8");
        }
        if !(self.dt_min > 0.0 && self.dt_min < self.dt_initial) {
            return bad("need 0 < dt_min < dt_initial");
        }
        if !(self.dt_safety > 0.0) || !(self.t_end > 0.0) {
            return bad("dt_safety and t_end must be positive");
        }
        if matches!(self.kappa_stop, Some(k) if !(k > 0.0)) || !(self.kappa_stop_factor > 0.0) {
            return bad("kappa_stop must be positive");
        }
        if !(self.snapshot_growth > 1.0) {
            return bad("snapshot_growth must exceed 1");
        }
        if !(self.redistribution_weight >= 0.0) {
            return bad("redistribution_weight must be non-negative");
        }
        if let Redistribution::EveryKSteps(0) = self.redistribution {
            return bad("redistribution interval must be positive");
        }
        Ok(())
    }

    /// The configured stop threshold, or the default for this initial curve.
    pub fn kappa_stop_for(&self, length0: f64, kappa_max0: f64) -> f64 {
        self.kappa_stop.unwrap_or_else(|| (1e3 / length0).max(self.kappa_stop_factor * kappa_max0))
    }
}
