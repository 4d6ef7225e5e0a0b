use std::path::{Path, PathBuf};

use apcsf_flow::FlowConfig;
use apcsf_geometry::parse_curve;
use apcsf_support::{parse_support, AnchoredCurve, SupportCurve, SupportDocument};
use serde::{Deserialize, Serialize};

use crate::recipes::{generate_example_on, ExampleName, RecipeReport};
use crate::shapes::{perpendicular_arc, spline_curve, ArcParams, SplineParams};
use crate::CliError;

/// Where the initial curve comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialSpec {
    ExampleOne,
    ExampleTwo,
    ExampleThree,
    ExampleFour,
    /// A curve document with an open curve; it is anchored on the support.
    FromFile(PathBuf),
    Arc(ArcParams),
    CustomSpline(SplineParams),
}

impl InitialSpec {
    pub fn example(&self) -> Option<ExampleName> {
        match self {
            InitialSpec::ExampleOne => Some(ExampleName::One),
            InitialSpec::ExampleTwo => Some(ExampleName::Two),
            InitialSpec::ExampleThree => Some(ExampleName::Three),
            InitialSpec::ExampleFour => Some(ExampleName::Four),
            _ => None,
        }
    }

    pub fn from_example(name: ExampleName) -> Self {
        match name {
            ExampleName::One => InitialSpec::ExampleOne,
            ExampleName::Two => InitialSpec::ExampleTwo,
            ExampleName::Three => InitialSpec::ExampleThree,
            ExampleName::Four => InitialSpec::ExampleFour,
        }
    }

    /// Parses the command-line form: `example_one`…`example_four` (or just
    /// `one`…`four`), `from_file(PATH)`, `arc(RADIUS[,BUMP])`.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let t = text.trim();
        if let Some(inner) = call(t, "from_file") {
            return Ok(InitialSpec::FromFile(PathBuf::from(inner)));
        }
        if let Some(inner) = call(t, "arc") {
            let v = numbers(inner)?;
            let (radius, bump) = match v.as_slice() {
                [r] => (*r, 0.0),
                [r, b] => (*r, *b),
                _ => return Err(CliError::Usage(format!("arc takes a radius and an optional bump: `{t}`"))),
            };
            return Ok(InitialSpec::Arc(ArcParams { radius, bump, at: std::f64::consts::FRAC_PI_2, nodes: 400 }));
        }
        let name = t.strip_prefix("example_").unwrap_or(t);
        name.parse::<ExampleName>()
            .map(Self::from_example)
            .map_err(|_| CliError::Usage(format!("unknown initial curve `{t}`")))
    }
}

fn call<'a>(text: &'a str, name: &str) -> Option<&'a str> {
    text.strip_prefix(name)?.trim().strip_prefix('(')?.strip_suffix(')')
}

fn numbers(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("not a number: `{}`", p.trim()))))
        .collect()
}

/// Parses `circle`, `circle(R)`, `ellipse(A,B)`, `line`, or a path to a
/// support document.
pub fn parse_support_spec(text: &str) -> Result<SupportDocument, CliError> {
    let t = text.trim();
    match t {
        "circle" => return Ok(SupportDocument::Circle { center: [0.0, 0.0], radius: 4.0 }),
        "line" => return Ok(SupportDocument::Line { point: [0.0, 0.0], direction: [-1.0, 0.0] }),
        _ => {}
    }
    if let Some(inner) = call(t, "circle") {
        if let [r] = numbers(inner)?.as_slice() {
            return Ok(SupportDocument::Circle { center: [0.0, 0.0], radius: *r });
        }
    }
    if let Some(inner) = call(t, "ellipse") {
        if let [a, b] = numbers(inner)?.as_slice() {
            return Ok(SupportDocument::Ellipse { center: [0.0, 0.0], semi_axes: [*a, *b], rotation: 0.0 });
        }
    }
    let text = read_file(Path::new(t))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{t}: {e}")))
}

/// Reads a text file, mapping failures to [`CliError::Io`].
pub fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Analyses {
    /// Finite-time criterion on a closed support.
    pub criterion: bool,
    /// Singular time, rate floor, type and Hamilton rescaling.
    pub blowup: bool,
    pub grim_fit: bool,
    pub l2_rate: bool,
    /// Reflected-curve criterion on a line support.
    pub line_criteria: bool,
}

impl Default for Analyses {
    fn default() -> Self {
        Analyses { criterion: true, blowup: true, grim_fit: true, l2_rate: true, line_criteria: false }
    }
}

fn default_support() -> SupportDocument {
    SupportDocument::Circle { center: [0.0, 0.0], radius: 4.0 }
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_support")]
    pub support: SupportDocument,
    pub initial: InitialSpec,
    #[serde(default)]
    pub flow: FlowConfig,
    #[serde(default)]
    pub analyses: Analyses,
    #[serde(default = "default_output")]
    pub output_dir: PathBuf,
    /// Recorded in the report; no construction here is random.
    #[serde(default)]
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn new(initial: InitialSpec) -> Self {
        ExperimentConfig {
            support: default_support(),
            initial,
            flow: FlowConfig::default(),
            analyses: Analyses::default(),
            output_dir: default_output(),
            seed: 0,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Checks the cross-field invariants: the flow parameters, referenced
    /// files, and analysis flags against the support kind.
    pub fn validate(&self) -> Result<SupportCurve, CliError> {
        self.flow.validate()?;
        let support = self.support.build()?;
        if self.analyses.line_criteria && !support.is_line() {
            return Err(CliError::Config("line_criteria requires a line support".into()));
        }
        if let InitialSpec::FromFile(path) = &self.initial {
            if !path.is_file() {
                return Err(CliError::Config(format!("initial curve file {} does not exist", path.display())));
            }
        }
        Ok(support)
    }

    /// Builds the initial curve (and the recipe report for examples).
    pub fn initial_curve(&self, support: &SupportCurve) -> Result<(AnchoredCurve, Option<RecipeReport>), CliError> {
        if let Some(name) = self.initial.example() {
            let (c, r) = generate_example_on(name, support)?;
            return Ok((c, Some(r)));
        }
        let curve = match &self.initial {
            InitialSpec::FromFile(path) => {
                let doc = parse_curve(&read_file(path)?)?;
                AnchoredCurve::anchor(doc.to_open()?, support.clone())?
            }
            InitialSpec::Arc(p) => perpendicular_arc(support, p)?,
            InitialSpec::CustomSpline(p) => spline_curve(support, p)?,
            _ => unreachable!("examples handled above"),
        };
        Ok((curve, None))
    }
}

/// Overlays a config document onto another: top-level keys replace, except
/// that `flow` and `analyses` are merged key by key.
pub fn merge_config(base: &mut serde_json::Value, over: serde_json::Value) {
    let (Some(b), serde_json::Value::Object(o)) = (base.as_object_mut(), over) else {
        return;
    };
    for (k, v) in o {
        match (b.get_mut(&k), v) {
            (Some(serde_json::Value::Object(slot)), serde_json::Value::Object(fields)) if k == "flow" || k == "analyses" => {
                slot.extend(fields);
            }
            (_, v) => {
                b.insert(k, v);
            }
        }
    }
}

/// Parses a support document from a file path (used by the fuzz targets too).
pub fn load_support(path: &Path) -> Result<SupportCurve, CliError> {
    Ok(parse_support(&read_file(path)?)?)
}
