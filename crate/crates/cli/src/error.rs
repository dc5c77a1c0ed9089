use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("missing artifact {path}: {hint}")]
    MissingArtifact { path: PathBuf, hint: String },

    #[error("selection `{0}` matches no case")]
    EmptySelection(String),

    #[error("case {case}: {source}")]
    Case {
        case: String,
        #[source]
        source: hybrid_core::Error,
    },

    #[error(transparent)]
    Core(#[from] hybrid_core::Error),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Machine-readable form printed on request.
#[derive(Debug, Serialize)]
pub struct ErrorReport {
    pub kind: &'static str,
    pub exit_code: i32,
    pub message: String,
}

fn core_code(e: &hybrid_core::Error) -> (i32, &'static str) {
    use hybrid_core::Error as E;
    match e {
        E::Divergence { .. } => (3, "divergence"),
        E::Convergence { .. } => (3, "convergence"),
        E::Io { source, .. } if source.kind() == std::io::ErrorKind::NotFound => (4, "missing_artifact"),
        E::Io { .. } => (1, "io"),
        _ => (2, "config"),
    }
}

impl CliError {
    pub fn io(path: impl AsRef<Path>, source: std::io::Error) -> Self {
        CliError::Io { path: path.as_ref().to_path_buf(), source }
    }

    pub fn case(case: impl Into<String>, source: hybrid_core::Error) -> Self {
        CliError::Case { case: case.into(), source }
    }

    pub fn exit_code(&self) -> i32 {
        self.classify().0
    }

    fn classify(&self) -> (i32, &'static str) {
        match self {
            CliError::Config(_) => (2, "config"),
            CliError::EmptySelection(_) => (2, "empty_selection"),
            CliError::MissingArtifact { .. } => (4, "missing_artifact"),
            CliError::Case { source, .. } | CliError::Core(source) => core_code(source),
            CliError::Io { source, .. } if source.kind() == std::io::ErrorKind::NotFound => (4, "missing_artifact"),
            CliError::Io { .. } => (1, "io"),
        }
    }

    pub fn report(&self) -> ErrorReport {
        let (exit_code, kind) = self.classify();
        ErrorReport { kind, exit_code, message: self.to_string() }
    }
}
