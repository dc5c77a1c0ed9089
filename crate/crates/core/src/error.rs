use thiserror::Error;

/// Errors produced anywhere in the simulation and metrics pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("schema error: {0}")]
    Schema(String),

    #[error("empty dataset: {0}")]
    EmptyDataset(String),

    #[error("binning error: {0}")]
    Binning(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate spectrum: {0}")]
    DegenerateSpectrum(String),

    #[error("sampling error: {0}")]
    Sampling(String),

    #[error("frequency {freq:.4} rad/s outside coefficient table [{lo:.4}, {hi:.4}]")]
    Extrapolation { freq: f64, lo: f64, hi: f64 },

    #[error("validation error in `{block}`: {message}")]
    Validation { block: String, message: String },

    #[error("radiation kernel window error: {0}")]
    Window(String),

    #[error("solver did not converge: {message} (residual {residual:.3e})")]
    Convergence { message: String, residual: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("simulation diverged at t = {time:.3} s: {diagnostics}")]
    Divergence { time: f64, diagnostics: String },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("undefined metric: {0}")]
    UndefinedMetric(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    pub(crate) fn validation(block: &str, message: impl Into<String>) -> Self {
        Error::Validation {
            block: block.to_string(),
            message: message.into(),
        }
    }
}
