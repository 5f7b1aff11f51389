//! Output-directory relative paths and atomic writes.

use crate::error::{CliError, CliResult};
use serde::de::DeserializeOwned;
use serde::Serialize;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Root for every relative path given on the command line.
#[derive(Debug, Clone)]
pub struct OutDir(PathBuf);

impl OutDir {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        OutDir(root.into())
    }

    pub fn root(&self) -> &Path {
        &self.0
    }

    pub fn path(&self, rel: impl AsRef<Path>) -> PathBuf {
        self.0.join(rel)
    }

    /// Writes through a temporary file in the target directory, then renames it.
    pub fn write(&self, rel: impl AsRef<Path>, bytes: &[u8]) -> CliResult<PathBuf> {
        let path = self.path(rel);
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_else(|| self.0.clone());
        let io = |source| CliError::Io { path: path.clone(), source };
        std::fs::create_dir_all(&dir).map_err(io)?;
        let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io)?;
        tmp.write_all(bytes).map_err(io)?;
        tmp.persist(&path).map_err(|e| io(e.error))?;
        Ok(path)
    }

    pub fn write_json<T: Serialize>(&self, rel: impl AsRef<Path>, value: &T) -> CliResult<PathBuf> {
        let mut text = serde_json::to_string_pretty(value).expect("artifact types serialise");
        text.push('\n');
        self.write(rel, text.as_bytes())
    }

    pub fn read_json<T: DeserializeOwned>(&self, rel: impl AsRef<Path>) -> CliResult<T> {
        let path = self.path(rel);
        let text = std::fs::read_to_string(&path)
            .map_err(|e| CliError::Missing { path: path.clone(), reason: e.to_string() })?;
        serde_json::from_str(&text).map_err(|source| CliError::Json { path, source })
    }
}
