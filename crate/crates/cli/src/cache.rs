//! Content-addressed result cache for the grading-driven commands.

use std::fs;
use std::path::{Path, PathBuf};

use gcx_core::io::sha256_hex;
use gcx_core::{Convention, Ring};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    pub command: String,
    pub m: usize,
    pub n: i64,
    pub k: i64,
    pub convention: Convention,
    pub ring: Ring,
    pub version: String,
}

impl CacheKey {
    pub fn new(command: &str, m: usize, n: i64, k: i64, convention: Convention, ring: Ring) -> CacheKey {
        CacheKey {
            command: command.to_string(),
            m,
            n,
            k,
            convention,
            ring,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    fn file_name(&self) -> String {
        let raw = serde_json::to_vec(self).expect("key serializes");
        format!("{}.json", sha256_hex(&raw))
    }
}

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    key: CacheKey,
    content_hash: String,
    payload: String,
}

pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn new(dir: Option<PathBuf>) -> Cache {
        Cache { dir }
    }

    fn path(&self, key: &CacheKey) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(key.file_name()))
    }

    /// Entries whose key or hash disagree are treated as missing.
    fn load<T: DeserializeOwned>(path: &Path, key: &CacheKey) -> Option<T> {
        let raw = fs::read(path).ok()?;
        let entry: CacheEntry = serde_json::from_slice(&raw).ok()?;
        if entry.key != *key || sha256_hex(entry.payload.as_bytes()) != entry.content_hash {
            return None;
        }
        serde_json::from_str(&entry.payload).ok()
    }

    fn store<T: Serialize>(path: &Path, key: &CacheKey, value: &T) -> std::io::Result<()> {
        let payload = serde_json::to_string(value)?;
        let entry = CacheEntry { key: key.clone(), content_hash: sha256_hex(payload.as_bytes()), payload };
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir)?;
        }
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, serde_json::to_vec(&entry)?)?;
        fs::rename(&tmp, path)
    }

    pub fn get_or_compute<T, E, F>(&self, key: &CacheKey, compute: F) -> Result<T, E>
    where
        T: Serialize + DeserializeOwned,
        F: FnOnce() -> Result<T, E>,
    {
        let Some(path) = self.path(key) else {
            return compute();
        };
        if let Some(v) = Cache::load(&path, key) {
            return Ok(v);
        }
        let v = compute()?;
        // A read-only cache directory only costs the speed-up.
        if let Err(e) = Cache::store(&path, key, &v) {
            eprintln!("gcx: warning: cache write to {} failed: {e}", path.display());
        }
        Ok(v)
    }
}
