use std::path::PathBuf;
use std::process::ExitCode;

use apcsf_cli::config::{merge_config, read_file};
use apcsf_cli::{
    criterion_for, load_trajectory, parse_support_spec, run_experiment, CliError, ExampleName, ExitStatus,
    ExperimentConfig, InitialSpec, Verdict,
};
use apcsf_flow::{FlowConfig, Scheme};
use apcsf_singularity::{analyze_trajectory, TailConfig};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Like `println!`, but a closed pipe (e.g. `| head`) is not an error.
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

#[derive(Parser)]
#[command(name = "apcsf", version, about = "Area-preserving curve shortening flow with free boundary on a support curve")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the flow from an initial curve and write monitors, frames and a report.
    Simulate(RunArgs),
    /// Evaluate the finite-time singularity criterion for an initial curve.
    Check(RunArgs),
    /// Re-analyze a stored run directory for blow-up.
    Blowup {
        /// Directory written by `simulate`.
        #[arg(long)]
        dir: PathBuf,
    },
    /// List the example recipes, optionally writing their curves.
    Examples {
        #[arg(long, default_value = "circle")]
        support: String,
        /// Write example_<name>.json curve documents into this directory.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Print the minimal width d_Σ of a support.
    Width {
        #[arg(long, default_value = "circle")]
        support: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Explicit,
    SemiImplicit,
}

#[derive(Args)]
struct RunArgs {
    /// Experiment config (JSON); its entries override the flags.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Example one, two, three or four.
    #[arg(long, conflicts_with = "initial")]
    example: Option<String>,
    /// example_one…example_four, from_file(PATH) or arc(RADIUS[,BUMP]).
    #[arg(long)]
    initial: Option<String>,
    /// circle, circle(R), ellipse(A,B), line, or a support document path.
    #[arg(long)]
    support: Option<String>,
    #[arg(long)]
    nodes: Option<usize>,
    /// Largest time step.
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    dt_min: Option<f64>,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    kappa_stop: Option<f64>,
    #[arg(long, value_enum)]
    scheme: Option<SchemeArg>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Also evaluate the reflected-curve criterion and run the reflected flow (line supports).
    #[arg(long)]
    line_criteria: bool,
}

impl RunArgs {
    fn config(&self) -> Result<ExperimentConfig, CliError> {
        let initial = match (&self.example, &self.initial) {
            (Some(e), _) => InitialSpec::from_example(e.parse::<ExampleName>()?),
            (None, Some(i)) => InitialSpec::parse(i)?,
            (None, None) if self.config.is_some() => InitialSpec::ExampleOne,
            (None, None) => return Err(CliError::Usage("give --example, --initial or --config".into())),
        };
        // Examples run toward their singularity, so they start from the blow-up preset.
        let mut flow = if initial.example().is_some() { FlowConfig::blowup() } else { FlowConfig::default() };
        if let Some(n) = self.nodes {
            flow.node_count = n;
        }
        if let Some(dt) = self.dt {
            flow.dt_initial = dt;
        }
        if let Some(v) = self.dt_min {
            flow.dt_min = v;
        }
        if let Some(v) = self.t_end {
            flow.t_end = v;
        }
        if self.kappa_stop.is_some() {
            flow.kappa_stop = self.kappa_stop;
        }
        if let Some(s) = self.scheme {
            flow.scheme = match s {
                SchemeArg::Explicit => Scheme::Explicit,
                SchemeArg::SemiImplicit => Scheme::SemiImplicit,
            };
        }
        let mut config = ExperimentConfig::new(initial);
        config.flow = flow;
        if let Some(s) = &self.support {
            config.support = parse_support_spec(s)?;
        }
        if let Some(o) = &self.out {
            config.output_dir = o.clone();
        }
        if let Some(s) = self.seed {
            config.seed = s;
        }
        config.analyses.line_criteria = self.line_criteria;
        if let Some(path) = &self.config {
            let over: serde_json::Value = serde_json::from_str(&read_file(path)?)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            let mut base = serde_json::to_value(&config).expect("config serializes");
            merge_config(&mut base, over);
            config = serde_json::from_value(base).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        }
        Ok(config)
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn execute(cli: Cli) -> Result<ExitStatus, CliError> {
    match cli.command {
        Command::Simulate(args) => {
            let config = args.config()?;
            let result = run_experiment(&config)?;
            let r = &result.report;
            let mut line = format!(
                "{} after {} steps; wrote {}",
                r.outcome.kind,
                r.run.steps,
                config.output_dir.display()
            );
            if let Some(s) = &r.singularity {
                line.push_str(&format!("; T_est = {:.9} ({:?})", s.t_est, s.type_verdict));
            }
            say!("{line}");
            if let Some(e) = &r.analysis_error {
                eprintln!("analysis failed: {e}");
            }
            Ok(r.status)
        }
        Command::Check(args) => {
            let config = args.config()?;
            let support = config.validate()?;
            let (curve, _) = config.initial_curve(&support)?;
            let verdict = criterion_for(&curve)?;
            match &verdict {
                Verdict::Closed(v) => say!("{}", to_json(v)),
                Verdict::Line(v) => say!("{}", to_json(v)),
            }
            Ok(apcsf_cli::experiment::criterion_status(&verdict))
        }
        Command::Blowup { dir } => {
            let (trajectory, support) = load_trajectory(&dir)?;
            match analyze_trajectory(&trajectory, &support, &TailConfig::default()) {
                Ok(a) => {
                    let json = a.report.to_json();
                    std::fs::write(dir.join("blowup_report.json"), &json)
                        .map_err(|e| CliError::Io { path: dir.display().to_string(), message: e.to_string() })?;
                    say!("{json}");
                    Ok(ExitStatus::Completed)
                }
                Err(e) => {
                    eprintln!("analysis failed: {e}");
                    Ok(ExitStatus::AnalysisFailed)
                }
            }
        }
        Command::Examples { support, emit } => {
            let support = parse_support_spec(&support)?.build()?;
            if let Some(dir) = &emit {
                std::fs::create_dir_all(dir)
                    .map_err(|e| CliError::Io { path: dir.display().to_string(), message: e.to_string() })?;
            }
            for name in ExampleName::ALL {
                say!("{name}: {}", name.description());
                let (curve, report) = apcsf_cli::generate_example_on(name, &support)?;
                say!(
                    "  L0 = {:.6}, total curvature = {:.6}, A0 = {:.6}, self-intersections = {}",
                    report.length, report.total_curvature, report.area, report.self_intersections
                );
                if let Some(dir) = &emit {
                    let path = dir.join(format!("example_{name}.json"));
                    let doc = apcsf_geometry::CurveDocument::from_open(curve.curve());
                    std::fs::write(&path, doc.to_json())
                        .map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })?;
                }
            }
            Ok(ExitStatus::Completed)
        }
        Command::Width { support } => {
            let support = parse_support_spec(&support)?.build()?;
            say!("{}", support.width_or_infinity());
            Ok(ExitStatus::Completed)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(status) => ExitCode::from(status.code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if matches!(e, CliError::Singularity(_)) { 3 } else { 1 })
        }
    }
}
