use std::f64::consts::PI;

use apcsf_line::reflect;
use apcsf_support::AnchoredCurve;
use serde::Serialize;

use crate::SingularityError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CriterionCase {
    /// `A₀ > 0` and `L₀²/A₀ ≤ π(2l−1)²/l`.
    PositiveAreaQuotient,
    /// `A₀ < 0`.
    NegativeArea,
    NotApplicable,
}

/// Evaluation of the finite-time singularity criterion for a curve on a closed
/// convex support.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionVerdict {
    /// Whether γ₀ was reversed to make ∫κ ds positive.
    pub reoriented: bool,
    /// ∫κ ds after orientation.
    pub total_curvature: f64,
    /// The integer with `(2l−2)π < ∫κ ds < 2lπ`.
    pub l: i64,
    #[serde(rename = "L0")]
    pub length: f64,
    #[serde(rename = "d_sigma")]
    pub width: f64,
    /// `A(γ₀ + σ₀)` after orientation.
    #[serde(rename = "A0")]
    pub area: f64,
    /// `L₀²/A₀`, present when `A₀ > 0`.
    pub quotient: Option<f64>,
    /// `π(2l−1)²/l`.
    pub threshold: f64,
    /// The sharper `π(2l−1)²/(l − 7/(20π))`, recorded but not used.
    pub refined_threshold: f64,
    pub case: CriterionCase,
    pub predicted_singularity: bool,
    /// Why the verdict is NotApplicable, if it is.
    pub note: Option<String>,
}

fn thresholds(l: i64) -> (f64, f64) {
    let odd = (2 * l - 1) as f64;
    let l = l as f64;
    (PI * odd * odd / l, PI * odd * odd / (l - 7.0 / (20.0 * PI)))
}

/// Relative tolerance under which `A₀` counts as zero and ∫κ ds as a multiple of 2π.
const DEGENERACY_TOLERANCE: f64 = 1e-9;

pub fn check_criterion(initial: &AnchoredCurve) -> Result<CriterionVerdict, SingularityError> {
    if !initial.support().is_closed() {
        return Err(SingularityError::NeedsClosedSupport);
    }
    let width = initial.support().minimum_width()?;
    let mut curve = initial.clone();
    let mut total_curvature = curve.total_curvature();
    let reoriented = total_curvature < 0.0;
    if reoriented {
        curve = curve.reversed();
        total_curvature = curve.total_curvature();
    }
    let length = curve.curve().length();
    let area = curve.enclosed_area()?;
    let l = (total_curvature / (2.0 * PI)).ceil() as i64;
    let (threshold, refined_threshold) = thresholds(l.max(1));
    let quotient = (area > 0.0).then(|| length * length / area);
    let mut verdict = CriterionVerdict {
        reoriented,
        total_curvature,
        l,
        length,
        width,
        area,
        quotient,
        threshold,
        refined_threshold,
        case: CriterionCase::NotApplicable,
        predicted_singularity: false,
        note: None,
    };
    let turns = total_curvature / (2.0 * PI);
    if (turns - turns.round()).abs() < DEGENERACY_TOLERANCE {
        verdict.note = Some("∫κ ds is a multiple of 2π".into());
    } else if !(length < width) {
        verdict.note = Some(format!("L0 = {length:.6} is not below d_sigma = {width:.6}"));
    } else if area.abs() <= DEGENERACY_TOLERANCE * length * length {
        verdict.note = Some("A0 vanishes".into());
    } else if area < 0.0 {
        verdict.case = CriterionCase::NegativeArea;
        verdict.predicted_singularity = true;
    } else if quotient.is_some_and(|q| q <= threshold) {
        verdict.case = CriterionCase::PositiveAreaQuotient;
        verdict.predicted_singularity = true;
    } else {
        verdict.note = Some(format!("L0^2/A0 = {:.6} exceeds the threshold {threshold:.6}", length * length / area));
    }
    Ok(verdict)
}

/// Evaluation of the criterion for a curve on a straight line, in terms of
/// its reflected double δ₀.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LineCriterionVerdict {
    /// Index of δ₀ after orienting it positively (always odd).
    pub m: i64,
    #[serde(rename = "L_delta")]
    pub length: f64,
    #[serde(rename = "A_delta")]
    pub area: f64,
    /// `A(δ₀) < 0`.
    pub negative_area: bool,
    /// `m ≥ 3` and `L(δ₀)² < 4πm·A(δ₀)`.
    pub isoperimetric_deficit: bool,
    pub predicted_singularity: bool,
}

/// The two line-support conditions as plain arithmetic.
pub fn evaluate_line_conditions(m: i64, length: f64, area: f64) -> Result<LineCriterionVerdict, SingularityError> {
    if m % 2 == 0 {
        return Err(apcsf_line::LineError::EvenIndex { m }.into());
    }
    let negative_area = area < 0.0;
    let isoperimetric_deficit = m >= 3 && length * length < 4.0 * PI * m as f64 * area;
    Ok(LineCriterionVerdict {
        m,
        length,
        area,
        negative_area,
        isoperimetric_deficit,
        predicted_singularity: negative_area || isoperimetric_deficit,
    })
}

pub fn check_line_criterion(initial: &AnchoredCurve) -> Result<LineCriterionVerdict, SingularityError> {
    if !initial.support().is_line() {
        return Err(SingularityError::NeedsLineSupport);
    }
    let delta = reflect(initial)?;
    evaluate_line_conditions(delta.index(), delta.length(), delta.area())
}
