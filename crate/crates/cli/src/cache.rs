//! On-disk results cache. Entries are JSON files named by the SHA-256 of
//! their key, so cache contents never depend on input paths.

use std::fs;
use std::path::{Path, PathBuf};

use posat::search::{Level, LevelCache, LevelStats};
use posat::{saturation_verdict, Family, PatternPoset};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const ENV_VAR: &str = "POSAT_CACHE_DIR";
pub const DEFAULT_DIR: &str = ".posat-cache";

#[derive(Clone, Debug)]
pub struct DiskCache {
    dir: PathBuf,
}

/// A finished search as stored on disk.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct StoredCertificate {
    pub n: usize,
    pub pattern_key: String,
    pub value: usize,
    /// Family text of the witness.
    pub witness: String,
    pub nodes: u64,
    pub levels: Vec<LevelStats>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl DiskCache {
    pub fn new(dir: impl Into<PathBuf>) -> DiskCache {
        DiskCache { dir: dir.into() }
    }

    /// Flag, then environment variable, then the default directory.
    pub fn resolve(flag: Option<&Path>) -> DiskCache {
        let dir = flag
            .map(Path::to_path_buf)
            .or_else(|| std::env::var_os(ENV_VAR).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_DIR));
        DiskCache::new(dir)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, kind: &str, key: &str) -> PathBuf {
        self.dir
            .join(kind)
            .join(format!("{}.json", sha256_hex(key.as_bytes())))
    }

    fn read<T: for<'de> Deserialize<'de>>(&self, path: &Path) -> Option<T> {
        let bytes = fs::read(path).ok()?;
        serde_json::from_slice(&bytes).ok()
    }

    /// Best effort: a failed write only loses the cache entry.
    fn write<T: Serialize>(&self, path: &Path, value: &T) {
        let Some(parent) = path.parent() else { return };
        if fs::create_dir_all(parent).is_err() {
            return;
        }
        let Ok(bytes) = serde_json::to_vec(value) else {
            return;
        };
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        if fs::write(&tmp, bytes).is_ok() && fs::rename(&tmp, path).is_err() {
            let _ = fs::remove_file(&tmp);
        }
    }

    fn certificate_key(n: usize, pattern: &PatternPoset) -> String {
        format!("certificate\n{n}\n{}", pattern.canonical_key())
    }

    /// The stored certificate, if its witness still checks out as a
    /// saturated family of the recorded size.
    pub fn load_certificate(&self, n: usize, pattern: &PatternPoset) -> Option<StoredCertificate> {
        let stored: StoredCertificate =
            self.read(&self.path("certificates", &Self::certificate_key(n, pattern)))?;
        if stored.n != n || stored.pattern_key != pattern.canonical_key() {
            return None;
        }
        let witness = Family::parse(&stored.witness).ok()?;
        let valid = witness.ground_size() == n
            && witness.len() == stored.value
            && saturation_verdict(&witness, pattern).ok()?.is_saturated();
        valid.then_some(stored)
    }

    pub fn store_certificate(&self, pattern: &PatternPoset, cert: &StoredCertificate) {
        self.write(
            &self.path("certificates", &Self::certificate_key(cert.n, pattern)),
            cert,
        );
    }
}

fn level_key(n: usize, pattern: &PatternPoset, size: usize) -> String {
    format!("level\n{n}\n{}\n{size}", pattern.canonical_key())
}

impl LevelCache for DiskCache {
    fn load(&self, n: usize, pattern: &PatternPoset, size: usize) -> Option<Level> {
        let level: Level = self.read(&self.path("levels", &level_key(n, pattern, size)))?;
        (level.size == size).then_some(level)
    }

    fn store(&self, n: usize, pattern: &PatternPoset, level: &Level) {
        self.write(
            &self.path("levels", &level_key(n, pattern, level.size)),
            level,
        );
    }
}
