//! Atomic file output and the on-disk table cache.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

/// Writes `text` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Stdout when `path` is `None`.
pub fn emit(path: Option<&Path>, text: &str) -> std::io::Result<()> {
    match path {
        Some(p) => write_atomic(p, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

pub const CACHE_ENV: &str = "GTCNET_CACHE_DIR";

pub fn cache_version() -> String {
    format!("{}+{}", env!("CARGO_PKG_VERSION"), gtc::sampler::TABLE_VERSION)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    pub version: String,
    pub max_n: usize,
    /// `k` or `k_i`.
    pub marker: String,
    pub format: String,
}

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    key: CacheKey,
    body: String,
}

/// Table exports keyed by size, marker mode and code version.
pub struct TableCache {
    dir: PathBuf,
}

impl TableCache {
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_ENV).map(|d| TableCache { dir: d.into() })
    }

    fn path(&self, key: &CacheKey) -> PathBuf {
        self.dir
            .join(format!("table-{}-n{}-{}.{}.json", key.version, key.max_n, key.marker, key.format))
    }

    /// A stored body whose recorded key matches exactly.
    pub fn get(&self, key: &CacheKey) -> Option<String> {
        let text = std::fs::read_to_string(self.path(key)).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        (entry.key == *key).then_some(entry.body)
    }

    pub fn put(&self, key: &CacheKey, body: &str) -> std::io::Result<()> {
        std::fs::create_dir_all(&self.dir)?;
        let entry = CacheEntry {
            key: key.clone(),
            body: body.to_string(),
        };
        write_atomic(&self.path(key), &serde_json::to_string(&entry).expect("plain data"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cache_round_trip_and_version_mismatch() {
        let dir = tempfile::tempdir().unwrap();
        let cache = TableCache {
            dir: dir.path().to_path_buf(),
        };
        let key = CacheKey {
            version: cache_version(),
            max_n: 3,
            marker: "k".into(),
            format: "csv".into(),
        };
        assert_eq!(cache.get(&key), None);
        cache.put(&key, "n,k,count\n").unwrap();
        assert_eq!(cache.get(&key).as_deref(), Some("n,k,count\n"));
        // a stale entry under the same file name is ignored
        let stale = CacheEntry {
            key: CacheKey {
                version: "0.0.0".into(),
                ..key.clone()
            },
            body: "old".into(),
        };
        write_atomic(&cache.path(&key), &serde_json::to_string(&stale).unwrap()).unwrap();
        assert_eq!(cache.get(&key), None);
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.txt");
        write_atomic(&p, "a").unwrap();
        write_atomic(&p, "b").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "b");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
