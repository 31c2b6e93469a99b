//! On-disk cache of computed JSON payloads.
//!
//! An entry lives in `<dir>/<key>.json` and stores the key, the payload and a
//! SHA-256 checksum of the payload's serialization. Entries whose key or
//! checksum do not match are ignored and recomputed. Writes go to a temporary
//! file in the same directory and are renamed into place.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

/// Bumped whenever the payload layout of any cached operation changes.
pub const FORMAT_VERSION: u32 = 1;

pub const DEFAULT_DIR: &str = ".kpcat-cache";

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn disabled() -> Self {
        Self { dir: None }
    }

    pub fn at(dir: impl Into<PathBuf>) -> Self {
        Self { dir: Some(dir.into()) }
    }

    /// `KPCAT_CACHE_DIR`, or `.kpcat-cache` in the working directory.
    pub fn from_env() -> Self {
        Self::at(
            std::env::var_os("KPCAT_CACHE_DIR")
                .map(PathBuf::from)
                .unwrap_or_else(|| DEFAULT_DIR.into()),
        )
    }

    pub fn key(op: &str, args: &Value) -> String {
        let material = format!(
            "kpcat/{}/format-{FORMAT_VERSION}\n{op}\n{}",
            env!("CARGO_PKG_VERSION"),
            serde_json::to_string(args).expect("JSON values serialize")
        );
        sha256_hex(material.as_bytes())
    }

    pub fn get_or_compute<E>(
        &self,
        op: &str,
        args: &Value,
        compute: impl FnOnce() -> std::result::Result<Value, E>,
    ) -> std::result::Result<Value, E> {
        let Some(dir) = &self.dir else {
            return compute();
        };
        let key = Self::key(op, args);
        let path = dir.join(format!("{key}.json"));
        if let Some(payload) = read_entry(&path, &key) {
            return Ok(payload);
        }
        let payload = compute()?;
        if let Err(err) = write_entry(dir, &path, &key, &payload) {
            eprintln!("warning: cache write failed: {err:#}");
        }
        Ok(payload)
    }
}

fn read_entry(path: &Path, key: &str) -> Option<Value> {
    let text = fs::read_to_string(path).ok()?;
    let entry: Value = serde_json::from_str(&text).ok()?;
    if entry["key"].as_str()? != key {
        return None;
    }
    let payload = entry.get("payload")?.clone();
    let serialized = serde_json::to_string(&payload).ok()?;
    (entry["checksum"].as_str()? == sha256_hex(serialized.as_bytes())).then_some(payload)
}

fn write_entry(dir: &Path, path: &Path, key: &str, payload: &Value) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let serialized = serde_json::to_string(payload)?;
    let entry = json!({
        "key": key,
        "checksum": sha256_hex(serialized.as_bytes()),
        "payload": payload,
    });
    let nanos = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_nanos())
        .unwrap_or(0);
    let tmp = dir.join(format!(".{key}.{}.{nanos}.tmp", std::process::id()));
    let mut file = fs::File::create(&tmp).with_context(|| format!("creating {}", tmp.display()))?;
    file.write_all(serde_json::to_string(&entry)?.as_bytes())?;
    file.sync_all()?;
    drop(file);
    fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hit_returns_stored_payload_and_corruption_recomputes() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::at(dir.path());
        let args = json!({"n": 3});
        let first: Value = cache
            .get_or_compute::<()>("op", &args, || Ok(json!({"x": "1"})))
            .unwrap();
        let second: Value = cache
            .get_or_compute::<()>("op", &args, || panic!("should hit"))
            .unwrap();
        assert_eq!(first, second);

        let path = dir.path().join(format!("{}.json", Cache::key("op", &args)));
        let text = fs::read_to_string(&path).unwrap().replace("\"1\"", "\"2\"");
        fs::write(&path, text).unwrap();
        let third: Value = cache
            .get_or_compute::<()>("op", &args, || Ok(json!({"x": "1"})))
            .unwrap();
        assert_eq!(third, first);
    }

    #[test]
    fn keys_separate_operations_and_arguments() {
        let a = Cache::key("kp", &json!({"n": 3, "perm": "231"}));
        assert_ne!(a, Cache::key("kp", &json!({"n": 3, "perm": "312"})));
        assert_ne!(a, Cache::key("tilting", &json!({"n": 3, "perm": "231"})));
        assert_eq!(a, Cache::key("kp", &json!({"perm": "231", "n": 3})));
    }
}
