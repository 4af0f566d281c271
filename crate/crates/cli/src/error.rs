use std::path::PathBuf;

use fkdv_core::experiments::ExperimentError;
use fkdv_core::reference::ReferenceError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Every problem found while validating, reported together.
    #[error("configuration error:{}", bullets(.0))]
    Config(Vec<String>),
    #[error("{module}: {message}")]
    Numerical { module: &'static str, message: String },
    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn bullets(items: &[String]) -> String {
    items.iter().map(|s| format!("\n  - {s}")).collect()
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(vec![msg.into()])
    }

    pub fn numerical(module: &'static str, err: impl ToString) -> Self {
        CliError::Numerical { module, message: err.to_string() }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            _ => 3,
        }
    }
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Parameter { .. } => CliError::config(format!("experiments: {e}")),
            ExperimentError::Reference(r) => r.into(),
            other => CliError::numerical("experiments", other),
        }
    }
}

impl From<ReferenceError> for CliError {
    fn from(e: ReferenceError) -> Self {
        match e {
            ReferenceError::Parameter { .. } | ReferenceError::Multivalued { .. } | ReferenceError::Profile(_) => {
                CliError::config(format!("reference: {e}"))
            }
            other => CliError::numerical("reference", other),
        }
    }
}
