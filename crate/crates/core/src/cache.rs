//! On-disk cache of exact matrices, one JSON file per matrix.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cyclotomic::Field;
use crate::error::{Result, TqftError};
use crate::graph::AdmissibleBasis;
use crate::rep::{MatrixJson, RepMatrix};
use crate::slalom::CONVENTION_VERSION;

pub const CACHE_DIR_ENV: &str = "TQFT_CACHE_DIR";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheHeader {
    pub tree: String,
    pub k: u32,
    pub i: u32,
    /// What the matrix is, e.g. `coxeter`, `twa 1`, `word A1 B1^-1`.
    pub what: String,
    pub hash: String,
    pub convention: String,
}

impl CacheHeader {
    pub fn new(tree: &str, k: u32, i: u32, what: &str) -> Self {
        let mut h = Sha256::new();
        h.update(format!("{CONVENTION_VERSION}\n{tree}\n{k}\n{i}\n{what}").as_bytes());
        let hash = h.finalize().iter().map(|b| format!("{b:02x}")).collect();
        CacheHeader {
            tree: tree.to_string(),
            k,
            i,
            what: what.to_string(),
            hash,
            convention: CONVENTION_VERSION.to_string(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct CacheFile {
    header: CacheHeader,
    matrix: MatrixJson,
}

#[derive(Debug, Clone)]
pub struct MatrixCache {
    dir: PathBuf,
}

impl MatrixCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        MatrixCache { dir: dir.into() }
    }

    /// Explicit directory, else `$TQFT_CACHE_DIR`, else no cache.
    pub fn resolve(explicit: Option<&Path>) -> Option<Self> {
        explicit
            .map(Path::to_path_buf)
            .or_else(|| std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from))
            .map(MatrixCache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, header: &CacheHeader) -> PathBuf {
        self.dir.join(format!("{}.json", &header.hash[..32]))
    }

    /// A stale or foreign file counts as a miss.
    pub fn load(&self, header: &CacheHeader, basis: &Arc<AdmissibleBasis>, field: &Field) -> Result<Option<RepMatrix>> {
        let path = self.path(header);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let Ok(file) = serde_json::from_str::<CacheFile>(&text) else {
            return Ok(None);
        };
        if file.header != *header {
            return Ok(None);
        }
        RepMatrix::from_json(basis, field, &file.matrix)
            .map(Some)
            .map_err(|e| TqftError::Cache(format!("{}: {e}", path.display())))
    }

    /// Writes to a temporary file and renames it into place.
    pub fn store(&self, header: &CacheHeader, m: &RepMatrix) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path(header);
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        let file = CacheFile {
            header: header.clone(),
            matrix: m.to_json(),
        };
        fs::write(&tmp, serde_json::to_vec(&file)?)?;
        fs::rename(&tmp, &path)?;
        Ok(())
    }

    pub fn get_or_compute(
        &self,
        header: &CacheHeader,
        basis: &Arc<AdmissibleBasis>,
        field: &Field,
        compute: impl FnOnce() -> Result<RepMatrix>,
    ) -> Result<RepMatrix> {
        if let Some(m) = self.load(header, basis, field)? {
            return Ok(m);
        }
        let m = compute()?;
        self.store(header, &m)?;
        Ok(m)
    }
}
