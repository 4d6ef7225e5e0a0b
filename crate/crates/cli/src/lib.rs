//! Experiment driver: example initial curves, configuration, runs and file
//! output for the free-boundary area-preserving flow.

pub mod config;
mod error;
pub mod experiment;
pub mod recipes;
pub mod shapes;
pub mod svg;

pub use config::{parse_support_spec, Analyses, ExperimentConfig, InitialSpec};
pub use error::CliError;
pub use experiment::{criterion_for, load_trajectory, run_experiment, ExitStatus, ExperimentReport, ExperimentResult, Verdict};
pub use recipes::{generate_example, generate_example_on, ExampleName, ExampleRecipe, RecipeReport, Target};
