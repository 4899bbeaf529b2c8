//! Content-addressed store of `Θ` expansions.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Mutex;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thetacert_core::witten::build_theta_bundle;
use thetacert_core::{Error, Result, RootProfile, ThetaBundleKind, ThetaBundleSeries, ThetaSource};

/// Bumped whenever the stored series format or its computation changes.
pub const CACHE_TAG: &str = concat!("thetacert-", env!("CARGO_PKG_VERSION"), "/theta-v1");

/// Disk cache (when a directory is given) in front of a per-process memo.
pub struct CachedSource {
    dir: Option<PathBuf>,
    memo: Mutex<HashMap<String, ThetaBundleSeries>>,
}

impl CachedSource {
    pub fn new(dir: Option<PathBuf>) -> std::io::Result<Self> {
        if let Some(d) = &dir {
            fs::create_dir_all(d)?;
        }
        Ok(CachedSource { dir, memo: Mutex::new(HashMap::new()) })
    }

    fn key(kind: ThetaBundleKind, profile: RootProfile, q_order: u32) -> String {
        format!(
            "op=theta-bundle;kind={};fiber_dim={};max_form_degree={};q_order={};tag={CACHE_TAG}",
            kind.as_str(),
            profile.fiber_dim(),
            profile.max_form_degree(),
            q_order
        )
    }

    fn path_for(&self, key: &str) -> Option<PathBuf> {
        let digest = hex::encode(Sha256::digest(key.as_bytes()));
        self.dir.as_ref().map(|d| d.join(format!("{digest}.json")))
    }

    fn read(&self, key: &str) -> Option<ThetaBundleSeries> {
        let text = fs::read_to_string(self.path_for(key)?).ok()?;
        let v: Value = serde_json::from_str(&text).ok()?;
        if v.get("key")?.as_str()? != key {
            return None;
        }
        ThetaBundleSeries::from_json(v.get("series")?).ok()
    }

    fn write(&self, key: &str, theta: &ThetaBundleSeries) -> Result<()> {
        let Some(path) = self.path_for(key) else { return Ok(()) };
        let body = json!({ "key": key, "series": theta.to_json() }).to_string();
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        let io = |e: std::io::Error| Error::InvalidArgument(format!("cache write {}: {e}", path.display()));
        let mut f = fs::File::create(&tmp).map_err(io)?;
        f.write_all(body.as_bytes()).map_err(io)?;
        fs::rename(&tmp, &path).map_err(io)
    }
}

impl ThetaSource for CachedSource {
    fn theta_bundle(&self, kind: ThetaBundleKind, profile: RootProfile, q_order: u32) -> Result<ThetaBundleSeries> {
        let key = Self::key(kind, profile, q_order);
        if let Some(hit) = self.memo.lock().expect("cache lock").get(&key) {
            return Ok(hit.clone());
        }
        let theta = match self.read(&key) {
            Some(t) => t,
            None => {
                let t = build_theta_bundle(kind, profile, q_order);
                self.write(&key, &t)?;
                t
            }
        };
        self.memo.lock().expect("cache lock").insert(key, theta.clone());
        Ok(theta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stored_series_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let profile = RootProfile::new(6, 8).unwrap();
        let cold = CachedSource::new(Some(dir.path().into())).unwrap();
        let a = cold.theta_bundle(ThetaBundleKind::Theta2, profile, 5).unwrap();
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
        let warm = CachedSource::new(Some(dir.path().into())).unwrap();
        let key = CachedSource::key(ThetaBundleKind::Theta2, profile, 5);
        assert_eq!(warm.read(&key).unwrap(), a);
        assert_eq!(a, build_theta_bundle(ThetaBundleKind::Theta2, profile, 5));
    }

    #[test]
    fn foreign_file_is_ignored() {
        let dir = tempfile::tempdir().unwrap();
        let src = CachedSource::new(Some(dir.path().into())).unwrap();
        let profile = RootProfile::new(2, 4).unwrap();
        let key = CachedSource::key(ThetaBundleKind::Theta1, profile, 3);
        fs::write(src.path_for(&key).unwrap(), r#"{"key":"something else","series":{}}"#).unwrap();
        assert!(src.read(&key).is_none());
        assert!(src.theta_bundle(ThetaBundleKind::Theta1, profile, 3).is_ok());
    }
}
