//! On-disk artifacts: schema-versioned JSON, CSV and SVG, written atomically.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub schema_version: u32,
    pub kind: String,
    pub data: T,
}

/// Write via a sibling temp file and rename, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> CliResult<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = std::path::PathBuf::from(tmp);
    std::fs::write(&tmp, contents).map_err(|e| CliError::io(&tmp, e))?;
    std::fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, kind: &str, data: &T) -> CliResult<()> {
    let env = Envelope { schema_version: SCHEMA_VERSION, kind: kind.to_string(), data };
    let mut text = serde_json::to_string_pretty(&env).map_err(hybrid_core::Error::from)?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

/// Read an artifact written by an earlier stage; absence is a missing-artifact error.
pub fn read_json<T: DeserializeOwned>(path: &Path, kind: &str, hint: &str) -> CliResult<T> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            return Err(CliError::MissingArtifact { path: path.to_path_buf(), hint: hint.to_string() })
        }
        Err(e) => return Err(CliError::io(path, e)),
    };
    let env: Envelope<T> = serde_json::from_str(&text).map_err(hybrid_core::Error::from)?;
    if env.schema_version != SCHEMA_VERSION || env.kind != kind {
        return Err(CliError::Config(format!(
            "{} holds `{}` schema {}, expected `{kind}` schema {SCHEMA_VERSION}",
            path.display(),
            env.kind,
            env.schema_version
        )));
    }
    Ok(env.data)
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    write_atomic(path, text.as_bytes())
}
