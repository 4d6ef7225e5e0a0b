use apcsf_flow::FlowError;
use apcsf_geometry::GeometryError;
use apcsf_line::LineError;
use apcsf_singularity::SingularityError;
use apcsf_support::SupportError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("example {example} cannot be built: {reason}")]
    RecipeInfeasible { example: String, reason: String },
    #[error("invalid experiment config: {0}")]
    Config(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Line(#[from] LineError),
    #[error(transparent)]
    Singularity(#[from] SingularityError),
    #[error(transparent)]
    Support(#[from] SupportError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}
