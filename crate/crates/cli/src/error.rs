use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("malformed scene: {0}")]
    Parse(String),
    #[error("invalid scene: {0}")]
    Validation(String),
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("metric `{metric}` does not apply to a {space} scene")]
    MetricSpaceMismatch { metric: String, space: String },
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error(transparent)]
    Core(#[from] funkspace_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
