use std::fs;
use std::path::{Path, PathBuf};

use apcsf_flow::{
    count_self_intersections, read_monitors, run, write_monitors, FlowConfig, MonitorRecord, Outcome, Run, Snapshot,
    Trajectory,
};
use apcsf_geometry::{ClosedCurve, CurveDocument, OpenCurve, Vec2};
use apcsf_line::{reflect, run_reflected, write_reflected_monitors};
use apcsf_singularity::{
    analyze_trajectory, check_criterion, check_line_criterion, Analysis, CriterionCase, CriterionVerdict,
    LineCriterionVerdict, SingularityReport, TailConfig,
};
use apcsf_support::{AnchoredCurve, SupportCurve, SupportDocument};
use serde::{Deserialize, Serialize};

use crate::config::{read_file, ExperimentConfig};
use crate::recipes::RecipeReport;
use crate::svg::{render, Viewport};
use crate::CliError;

/// Process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ExitStatus {
    Completed,
    CriterionNotApplicable,
    AnalysisFailed,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        match self {
            ExitStatus::Completed => 0,
            ExitStatus::CriterionNotApplicable => 2,
            ExitStatus::AnalysisFailed => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OutcomeSummary {
    pub kind: &'static str,
    pub t_stop: Option<f64>,
    pub t_est: Option<f64>,
    pub reason: Option<String>,
}

impl From<&Outcome> for OutcomeSummary {
    fn from(o: &Outcome) -> Self {
        match o {
            Outcome::ReachedTEnd => OutcomeSummary { kind: "reached_t_end", t_stop: None, t_est: None, reason: None },
            Outcome::CurvatureBlowup { t_est, t_stop } => {
                OutcomeSummary { kind: "curvature_blowup", t_stop: Some(*t_stop), t_est: Some(*t_est), reason: None }
            }
            Outcome::StepFailure { t_est, t_stop, reason } => {
                OutcomeSummary { kind: "step_failure", t_stop: Some(*t_stop), t_est: *t_est, reason: Some(reason.clone()) }
            }
        }
    }
}

/// Run-level diagnostics of the conservation and monotonicity laws.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunSummary {
    pub steps: usize,
    pub kappa_stop: f64,
    pub initial: MonitorRecord,
    pub last: MonitorRecord,
    /// `|A − A₀|/|A₀|` at the end of the run.
    pub area_drift: f64,
    /// Largest increase of L over one step (≤ 0 up to round-off).
    pub max_length_increase: f64,
    pub total_curvature_range: (f64, f64),
    pub self_intersections_initial: usize,
    pub self_intersections_final: usize,
}

impl RunSummary {
    pub fn of(run: &Run) -> Self {
        let m = &run.trajectory.monitors;
        let first = m[0].clone();
        let last = m.last().unwrap().clone();
        let max_length_increase = m.windows(2).map(|w| w[1].length - w[0].length).fold(f64::NEG_INFINITY, f64::max);
        let tc = m.iter().map(|r| r.total_curvature);
        let range = tc.clone().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        let snaps = &run.trajectory.snapshots;
        RunSummary {
            steps: m.len() - 1,
            kappa_stop: run.kappa_stop,
            area_drift: ((last.area - first.area) / first.area).abs(),
            initial: first,
            last,
            max_length_increase,
            total_curvature_range: range,
            self_intersections_initial: snaps.first().map_or(0, |s| s.self_intersections),
            self_intersections_final: snaps.last().map_or(0, |s| s.self_intersections),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub seed: u64,
    pub recipe: Option<RecipeReport>,
    pub criterion: Option<CriterionVerdict>,
    pub line_criterion: Option<LineCriterionVerdict>,
    pub outcome: OutcomeSummary,
    pub run: RunSummary,
    pub singularity: Option<SingularityReport>,
    pub analysis_error: Option<String>,
    pub status: ExitStatus,
}

pub struct ExperimentResult {
    pub report: ExperimentReport,
    pub run: Run,
    pub analysis: Option<Analysis>,
}

/// Stored per-frame metadata (frames/index.json).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameEntry {
    pub file: String,
    pub step: usize,
    pub time: f64,
    pub kappa_max: f64,
    pub endpoint_params: [f64; 2],
    pub self_intersections: usize,
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |e| CliError::Io { path: path.display().to_string(), message: e.to_string() }
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(io_err(path))
}

fn create_dir(path: &Path) -> Result<(), CliError> {
    fs::create_dir_all(path).map_err(io_err(path))
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

/// Criterion evaluation matching the support kind.
pub enum Verdict {
    Closed(CriterionVerdict),
    Line(LineCriterionVerdict),
}

pub fn criterion_for(curve: &AnchoredCurve) -> Result<Verdict, CliError> {
    if curve.support().is_line() {
        Ok(Verdict::Line(check_line_criterion(curve)?))
    } else {
        Ok(Verdict::Closed(check_criterion(curve)?))
    }
}

/// Generation, optional criterion, flow run, optional blow-up analyses and
/// file output (monitors.csv, frames/, blowup/, report.json, render.svg).
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult, CliError> {
    let support = config.validate()?;
    let out = &config.output_dir;
    create_dir(out)?;
    let (initial, recipe) = config.initial_curve(&support)?;
    let (mut criterion, mut line_criterion) = (None, None);
    if config.analyses.criterion || config.analyses.line_criteria {
        match criterion_for(&initial)? {
            Verdict::Closed(v) => criterion = Some(v),
            Verdict::Line(v) => line_criterion = Some(v),
        }
    }
    let run = run(&initial, &config.flow)?;
    let mut status = ExitStatus::Completed;
    let (mut analysis, mut analysis_error) = (None, None);
    let blew_up = !matches!(run.outcome, Outcome::ReachedTEnd);
    if config.analyses.blowup && blew_up {
        match analyze_trajectory(&run.trajectory, &support, &TailConfig::default()) {
            Ok(mut a) => {
                if !config.analyses.grim_fit {
                    a.report.grim_fit = None;
                }
                analysis = Some(a);
            }
            Err(e) => {
                analysis_error = Some(e.to_string());
                status = ExitStatus::AnalysisFailed;
            }
        }
    }
    let mut singularity = analysis.as_ref().map(|a| a.report.clone());
    if let (Some(s), false) = (singularity.as_mut(), config.analyses.l2_rate) {
        s.l2.series.clear();
    }
    write_outputs(config, &support, &run, analysis.as_ref())?;
    if config.analyses.line_criteria {
        write_reflected(out, &run, &config.flow)?;
    }
    let report = ExperimentReport {
        seed: config.seed,
        recipe,
        criterion,
        line_criterion,
        outcome: (&run.outcome).into(),
        run: RunSummary::of(&run),
        singularity,
        analysis_error,
        status,
    };
    write(&out.join("report.json"), &to_json(&report))?;
    Ok(ExperimentResult { report, run, analysis })
}

fn write_outputs(config: &ExperimentConfig, support: &SupportCurve, run: &Run, analysis: Option<&Analysis>) -> Result<(), CliError> {
    let out = &config.output_dir;
    write(&out.join("config.json"), &config.to_json())?;
    write(&out.join("support.json"), &to_json(&SupportDocument::describe(support)))?;
    let path = out.join("monitors.csv");
    let file = fs::File::create(&path).map_err(io_err(&path))?;
    write_monitors(std::io::BufWriter::new(file), &run.trajectory.monitors)?;

    let frames = out.join("frames");
    create_dir(&frames)?;
    let snaps = &run.trajectory.snapshots;
    let view = Viewport::fit(snaps.iter().map(|s| s.nodes.as_slice()), support);
    let mut index = Vec::new();
    for (i, s) in snaps.iter().enumerate() {
        let name = format!("frame_{i:05}");
        let curve = OpenCurve::new(s.nodes.clone())?;
        write(&frames.join(format!("{name}.json")), &CurveDocument::from_open(&curve).to_json())?;
        let piece = short_piece(support, &curve, s.endpoint_params);
        write(&frames.join(format!("{name}.svg")), &render(&view, support, &[&s.nodes], piece.as_deref()))?;
        index.push(FrameEntry {
            file: format!("{name}.json"),
            step: s.step,
            time: s.time,
            kappa_max: s.kappa_max,
            endpoint_params: s.endpoint_params,
            self_intersections: s.self_intersections,
        });
    }
    write(&frames.join("index.json"), &to_json(&index))?;

    let first = &snaps[0];
    let last = snaps.last().unwrap();
    let curve = OpenCurve::new(first.nodes.clone())?;
    let piece = short_piece(support, &curve, first.endpoint_params);
    write(&out.join("render.svg"), &render(&view, support, &[&first.nodes, &last.nodes], piece.as_deref()))?;

    if let Some(a) = analysis {
        write_blowup(&out.join("blowup"), a)?;
    }
    Ok(())
}

fn short_piece(support: &SupportCurve, curve: &OpenCurve, params: [f64; 2]) -> Option<Vec<Vec2>> {
    let anchored = AnchoredCurve::from_parts(curve.clone(), support.clone(), params);
    anchored.short_piece().ok().map(|p| p.samples)
}

#[derive(Serialize)]
struct BlowupEntry {
    file: String,
    j_inverse: f64,
    time: f64,
    tau: f64,
    scale: f64,
    node: usize,
}

fn write_blowup(dir: &Path, analysis: &Analysis) -> Result<(), CliError> {
    create_dir(dir)?;
    let mut index = Vec::new();
    for (i, st) in analysis.stages.iter().enumerate() {
        let frames = [("", Some(&st.frame)), ("_before", st.before.as_ref()), ("_after", st.after.as_ref())];
        for (suffix, frame) in frames {
            let Some(f) = frame else { continue };
            let file = format!("stage_{i:03}{suffix}.json");
            let curve = OpenCurve::new(f.curve.nodes.clone())?;
            write(&dir.join(&file), &CurveDocument::from_open(&curve).to_json())?;
            index.push(BlowupEntry { file, j_inverse: st.j_inverse, time: f.time, tau: f.tau, scale: st.scale, node: st.node });
        }
    }
    write(&dir.join("index.json"), &to_json(&index))
}

fn write_reflected(out: &Path, run: &Run, flow: &FlowConfig) -> Result<(), CliError> {
    let dir = out.join("reflected");
    create_dir(&dir)?;
    let start = AnchoredCurve::from_parts(
        OpenCurve::new(run.trajectory.snapshots[0].nodes.clone())?,
        run.final_state.anchored.support().clone(),
        run.trajectory.snapshots[0].endpoint_params,
    );
    let doubled = run_reflected(&reflect(&start)?, flow)?;
    let path = dir.join("monitors.csv");
    let file = fs::File::create(&path).map_err(io_err(&path))?;
    write_reflected_monitors(std::io::BufWriter::new(file), &doubled.monitors)?;
    for (i, s) in doubled.snapshots.iter().enumerate() {
        let closed = ClosedCurve::smooth(s.nodes.clone())?;
        write(&dir.join(format!("frame_{i:05}.json")), &CurveDocument::from_closed(&closed).to_json())?;
    }
    Ok(())
}

/// Reads a stored run directory back: monitors, frames and support.
pub fn load_trajectory(dir: &Path) -> Result<(Trajectory, SupportCurve), CliError> {
    let support = apcsf_support::parse_support(&read_file(&dir.join("support.json"))?)?;
    let path = dir.join("monitors.csv");
    let monitors = read_monitors(fs::File::open(&path).map_err(io_err(&path))?)?;
    let frames: PathBuf = dir.join("frames");
    let index: Vec<FrameEntry> = serde_json::from_str(&read_file(&frames.join("index.json"))?)
        .map_err(|e| CliError::Config(format!("frames/index.json: {e}")))?;
    let mut snapshots = Vec::with_capacity(index.len());
    for e in index {
        let doc = apcsf_geometry::parse_curve(&read_file(&frames.join(&e.file))?)?;
        let nodes = doc.to_open()?.into_nodes();
        snapshots.push(Snapshot {
            step: e.step,
            time: e.time,
            kappa_max: e.kappa_max,
            self_intersections: count_self_intersections(&nodes),
            nodes,
            endpoint_params: e.endpoint_params,
        });
    }
    Ok((Trajectory { monitors, snapshots }, support))
}

/// Exit status of a criterion check.
pub fn criterion_status(v: &Verdict) -> ExitStatus {
    match v {
        Verdict::Closed(c) if c.case == CriterionCase::NotApplicable => ExitStatus::CriterionNotApplicable,
        _ => ExitStatus::Completed,
    }
}
