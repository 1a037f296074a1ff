use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};

/// Results stored as JSON files named by the SHA-256 of their key. A file
/// that fails to read or parse is treated as a miss and overwritten.
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn new(dir: Option<&Path>) -> Self {
        Cache {
            dir: dir.map(Path::to_path_buf),
        }
    }

    pub fn disabled() -> Self {
        Cache { dir: None }
    }

    pub fn get_or_compute<T, F>(&self, key: &impl Serialize, compute: F) -> anyhow::Result<T>
    where
        T: Serialize + DeserializeOwned,
        F: FnOnce() -> anyhow::Result<T>,
    {
        let Some(dir) = &self.dir else {
            return compute();
        };
        let path = dir.join(format!("{}.json", digest(key)?));
        if let Some(hit) = fs::read_to_string(&path)
            .ok()
            .and_then(|text| serde_json::from_str(&text).ok())
        {
            return Ok(hit);
        }
        let value = compute()?;
        fs::create_dir_all(dir)?;
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, serde_json::to_string(&value)?)?;
        fs::rename(&tmp, &path)?;
        Ok(value)
    }
}

fn digest(key: &impl Serialize) -> anyhow::Result<String> {
    let bytes = serde_json::to_vec(key)?;
    Ok(format!("{:x}", Sha256::digest(&bytes)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hit_returns_stored_value() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(Some(dir.path()));
        let first: Vec<u32> = cache.get_or_compute(&("k", 1), || Ok(vec![1, 2, 3])).unwrap();
        let second: Vec<u32> = cache.get_or_compute(&("k", 1), || panic!("should be cached")).unwrap();
        assert_eq!(first, second);
        let other: Vec<u32> = cache.get_or_compute(&("k", 2), || Ok(vec![9])).unwrap();
        assert_eq!(other, vec![9]);
    }

    #[test]
    fn corrupt_entry_is_recomputed() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(Some(dir.path()));
        let _: u32 = cache.get_or_compute(&"x", || Ok(5)).unwrap();
        for entry in fs::read_dir(dir.path()).unwrap() {
            fs::write(entry.unwrap().path(), "not json").unwrap();
        }
        let v: u32 = cache.get_or_compute(&"x", || Ok(6)).unwrap();
        assert_eq!(v, 6);
    }

    #[test]
    fn disabled_always_computes() {
        let v: u32 = Cache::disabled().get_or_compute(&"x", || Ok(1)).unwrap();
        assert_eq!(v, 1);
    }
}
