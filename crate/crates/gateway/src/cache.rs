//! Content-addressed response store: one JSON file per key, named by the
//! hex SHA-256 of the request parts.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use jabberwock_core::translation::ProviderError;
use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};

/// Hashes length-prefixed parts so `("ab","c")` and `("a","bc")` differ.
pub fn cache_key(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p.as_bytes());
    }
    hex::encode(h.finalize())
}

#[derive(Debug, Clone)]
pub struct DiskCache {
    dir: PathBuf,
}

fn cache_err(path: &Path, e: impl std::fmt::Display) -> ProviderError {
    ProviderError::Cache(format!("{}: {e}", path.display()))
}

impl DiskCache {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, ProviderError> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| cache_err(&dir, e))?;
        Ok(DiskCache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn get<T: DeserializeOwned>(&self, key: &str) -> Result<Option<T>, ProviderError> {
        let path = self.path_for(key);
        match fs::read(&path) {
            Ok(bytes) => serde_json::from_slice(&bytes).map(Some).map_err(|e| cache_err(&path, e)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(cache_err(&path, e)),
        }
    }

    /// Writes to a temporary file in the cache directory, then renames it
    /// into place, so readers never observe a partial entry.
    pub fn put<T: Serialize>(&self, key: &str, value: &T) -> Result<(), ProviderError> {
        let path = self.path_for(key);
        let bytes = serde_json::to_vec_pretty(value).map_err(|e| cache_err(&path, e))?;
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(|e| cache_err(&path, e))?;
        tmp.write_all(&bytes).map_err(|e| cache_err(&path, e))?;
        tmp.persist(&path).map_err(|e| cache_err(&path, e.error))?;
        Ok(())
    }

    pub fn len(&self) -> usize {
        fs::read_dir(&self.dir)
            .map(|rd| rd.filter_map(Result::ok).filter(|e| e.path().extension().is_some_and(|x| x == "json")).count())
            .unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
