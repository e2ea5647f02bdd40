//! On-disk cache of Heilbronn sets: `<root>/heilbronn/d{d}/{x}_{y}.json`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use serde_json::{json, Value};

use super::heilbronn::{heilbronn_set, HeilbronnSet};
use crate::error::{Error, Result};
use crate::quad::QuadInt;
use crate::weight::GMatrix;

pub const FORMAT_VERSION: u64 = 1;

pub fn to_json(set: &HeilbronnSet) -> Value {
    let mats: Vec<Value> = set
        .matrices
        .iter()
        .map(|m| json!(m.entries().iter().map(|e| e.to_literal()).collect::<Vec<_>>()))
        .collect();
    json!({
        "format_version": FORMAT_VERSION,
        "d": set.d,
        "pi": set.pi.to_literal(),
        "matrices": mats,
        "diagnostics": set.diagnostics,
    })
}

pub fn from_json(v: &Value) -> Result<HeilbronnSet> {
    let bad = |what: &str| Error::Cache(format!("malformed cache entry: {what}"));
    if v["format_version"].as_u64() != Some(FORMAT_VERSION) {
        return Err(bad("format_version"));
    }
    let d = v["d"].as_u64().ok_or_else(|| bad("d"))? as u32;
    let pi = QuadInt::parse(d, v["pi"].as_str().ok_or_else(|| bad("pi"))?)?;
    let mut matrices = Vec::new();
    for m in v["matrices"].as_array().ok_or_else(|| bad("matrices"))? {
        let e = m.as_array().filter(|e| e.len() == 4).ok_or_else(|| bad("matrix"))?;
        let q = |i: usize| -> Result<QuadInt> { QuadInt::parse(d, e[i].as_str().ok_or_else(|| bad("entry"))?) };
        matrices.push(GMatrix::new(q(0)?, q(1)?, q(2)?, q(3)?));
    }
    let diagnostics = v["diagnostics"]
        .as_array()
        .ok_or_else(|| bad("diagnostics"))?
        .iter()
        .map(|s| s.as_str().map(String::from).ok_or_else(|| bad("diagnostic")))
        .collect::<Result<_>>()?;
    Ok(HeilbronnSet {
        d,
        pi,
        matrices,
        diagnostics,
    })
}

#[derive(Clone, Debug)]
pub struct HeilbronnCache {
    root: Option<PathBuf>,
}

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

impl HeilbronnCache {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        HeilbronnCache {
            root: Some(root.into()),
        }
    }

    /// A cache that always regenerates and never writes.
    pub fn disabled() -> Self {
        HeilbronnCache { root: None }
    }

    pub fn path_for(&self, pi: &QuadInt) -> Option<PathBuf> {
        self.root.as_ref().map(|r| {
            r.join("heilbronn")
                .join(format!("d{}", pi.d))
                .join(format!("{}_{}.json", pi.x, pi.y))
        })
    }

    /// Loads the set for `pi`, generating and storing it when missing or unreadable.
    pub fn get(&self, pi: &QuadInt) -> Result<HeilbronnSet> {
        let Some(path) = self.path_for(pi) else {
            return heilbronn_set(pi);
        };
        if let Ok(text) = fs::read_to_string(&path) {
            if let Ok(set) = serde_json::from_str::<Value>(&text)
                .map_err(|e| Error::Cache(e.to_string()))
                .and_then(|v| from_json(&v))
            {
                if set.pi == *pi {
                    return Ok(set);
                }
            }
        }
        let set = heilbronn_set(pi)?;
        write_atomic(&path, &to_json(&set))?;
        Ok(set)
    }
}

fn write_atomic(path: &Path, v: &Value) -> Result<()> {
    let err = |e: std::io::Error| Error::Cache(format!("{}: {e}", path.display()));
    let dir = path.parent().ok_or_else(|| Error::Cache("cache path has no parent".into()))?;
    fs::create_dir_all(dir).map_err(err)?;
    let tmp = dir.join(format!(
        ".{}.{}.{}.tmp",
        path.file_name().and_then(|s| s.to_str()).unwrap_or("entry"),
        std::process::id(),
        TMP_COUNTER.fetch_add(1, Ordering::Relaxed)
    ));
    {
        let mut f = fs::File::create(&tmp).map_err(err)?;
        let text = serde_json::to_string_pretty(v).map_err(|e| Error::Cache(e.to_string()))?;
        f.write_all(text.as_bytes()).map_err(err)?;
        f.sync_all().map_err(err)?;
    }
    fs::rename(&tmp, path).map_err(err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_reuse() {
        let dir = tempfile::tempdir().unwrap();
        let cache = HeilbronnCache::new(dir.path());
        let pi = QuadInt::new(11, 1, 1);
        let a = cache.get(&pi).unwrap();
        let path = cache.path_for(&pi).unwrap();
        assert!(path.ends_with("heilbronn/d11/1_1.json"));
        let text = fs::read_to_string(&path).unwrap();
        let b = from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(a, b);
        assert_eq!(cache.get(&pi).unwrap(), a);
        fs::write(&path, "not json").unwrap();
        assert_eq!(cache.get(&pi).unwrap(), a);
    }
}
