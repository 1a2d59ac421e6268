use std::path::PathBuf;

use movq::CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid config field `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("could not parse config: {0}")]
    Parse(String),

    #[error("refusing to overwrite {0} (pass --force to replace it)")]
    Collision(PathBuf),

    #[error("unknown figure id {0:?} (expected fig2, fig3, fig4, fig5 or fig6)")]
    UnknownFigure(String),

    #[error("{field}: {source}")]
    Model {
        field: String,
        #[source]
        source: CoreError,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl ExperimentError {
    pub fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        ExperimentError::Config { field: field.into(), reason: reason.into() }
    }

    pub fn model(field: impl Into<String>, source: CoreError) -> Self {
        ExperimentError::Model { field: field.into(), source }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        ExperimentError::Io { path: path.into(), source }
    }
}

pub type Result<T> = std::result::Result<T, ExperimentError>;
