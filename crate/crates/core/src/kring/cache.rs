use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::laurent::{JsonInt, LaurentPoly};
use crate::weyl_group::WeylGroup;

use super::{KClass, KRing};

/// Bumped whenever the on-disk layout or any convention changes.
pub const CACHE_SCHEMA_VERSION: u32 = 1;

/// SHA-256 over the stored reduced words, in element order.
pub fn reduced_word_hash(group: &WeylGroup) -> String {
    let mut hasher = Sha256::new();
    hasher.update(group.root_system().name().as_bytes());
    for w in group.ids() {
        hasher.update(b"|");
        hasher.update(group.word_label(w).as_bytes());
    }
    hex::encode(hasher.finalize())
}

type Restrictions = Vec<Vec<(Vec<i32>, JsonInt)>>;

#[derive(Serialize, Deserialize)]
struct CacheHeader {
    schema_version: u32,
    cartan_type: String,
    rank: usize,
    word_hash: String,
}

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    word: String,
    schubert: Restrictions,
    xi_lower: Restrictions,
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    header: CacheHeader,
    /// Fixed points in the order used by every restriction list.
    points: Vec<String>,
    classes: Vec<CacheEntry>,
}

/// Outcome of [`BasisCache::load_or_build`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CacheStatus {
    Hit,
    /// No file, or a file written under a different version or word choice.
    Miss,
}

/// On-disk store of the `O_w` and `ξ_w` restriction tables, one file per
/// root system.
#[derive(Debug, Clone)]
pub struct BasisCache {
    dir: PathBuf,
}

impl BasisCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        BasisCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, group: &WeylGroup) -> PathBuf {
        self.dir
            .join(format!("kflag-{}.json", group.root_system().name()))
    }

    /// Loads the tables for `group`, or `None` when absent or stale.
    pub fn load(&self, group: &WeylGroup) -> Result<Option<KRing>> {
        let path = self.path_for(group);
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(Error::Cache(format!("{}: {e}", path.display()))),
        };
        let file: CacheFile = serde_json::from_slice(&bytes)
            .map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
        let h = &file.header;
        if h.schema_version != CACHE_SCHEMA_VERSION
            || h.cartan_type != group.root_system().cartan_type().letter().to_string()
            || h.rank != group.rank()
            || h.word_hash != reduced_word_hash(group)
        {
            return Ok(None);
        }
        let labels: Vec<String> = group.ids().map(|w| group.word_label(w)).collect();
        if file.points != labels || file.classes.len() != group.order() {
            return Err(Error::Cache(format!(
                "{}: element list mismatch",
                path.display()
            )));
        }
        let n = group.rank();
        let decode = |table: &Restrictions| -> Result<KClass> {
            if table.len() != group.order() {
                return Err(Error::Cache("restriction table has wrong length".into()));
            }
            let restrictions = table
                .iter()
                .map(|terms| LaurentPoly::from_term_list(n, terms))
                .collect::<Result<Vec<_>>>()?;
            Ok(KClass::from_restrictions(restrictions))
        };
        let mut schubert = Vec::with_capacity(group.order());
        let mut xi_lower = Vec::with_capacity(group.order());
        for (entry, label) in file.classes.iter().zip(&labels) {
            if entry.word != *label {
                return Err(Error::Cache(format!("entry {} out of order", entry.word)));
            }
            schubert.push(decode(&entry.schubert)?);
            xi_lower.push(decode(&entry.xi_lower)?);
        }
        KRing::from_tables(group.clone(), schubert, xi_lower).map(Some)
    }

    /// Serialises the tables of `ring`; the output is a pure function of the
    /// root system and the stored reduced words.
    pub fn to_bytes(ring: &KRing) -> Result<Vec<u8>> {
        let group = ring.group();
        let (schubert, xi_lower) = ring.schubert_tables();
        let encode = |c: &KClass| -> Restrictions {
            c.restrictions()
                .iter()
                .map(LaurentPoly::to_term_list)
                .collect()
        };
        let file = CacheFile {
            header: CacheHeader {
                schema_version: CACHE_SCHEMA_VERSION,
                cartan_type: group.root_system().cartan_type().letter().to_string(),
                rank: group.rank(),
                word_hash: reduced_word_hash(group),
            },
            points: group.ids().map(|w| group.word_label(w)).collect(),
            classes: group
                .ids()
                .map(|w| CacheEntry {
                    word: group.word_label(w),
                    schubert: encode(&schubert[w.index()]),
                    xi_lower: encode(&xi_lower[w.index()]),
                })
                .collect(),
        };
        let mut bytes = serde_json::to_vec(&file).map_err(|e| Error::Cache(e.to_string()))?;
        bytes.push(b'\n');
        Ok(bytes)
    }

    /// Writes the tables atomically (temporary file, then rename).
    pub fn store(&self, ring: &KRing) -> Result<PathBuf> {
        let io = |e: std::io::Error| Error::Cache(format!("{}: {e}", self.dir.display()));
        fs::create_dir_all(&self.dir).map_err(io)?;
        let path = self.path_for(ring.group());
        let bytes = Self::to_bytes(ring)?;
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(io)?;
        tmp.write_all(&bytes).map_err(io)?;
        tmp.as_file().sync_all().map_err(io)?;
        tmp.persist(&path).map_err(|e| io(e.error))?;
        Ok(path)
    }

    pub fn load_or_build(&self, group: &WeylGroup) -> Result<(KRing, CacheStatus)> {
        if let Some(ring) = self.load(group)? {
            return Ok((ring, CacheStatus::Hit));
        }
        let ring = KRing::new(group.clone())?;
        self.store(&ring)?;
        Ok((ring, CacheStatus::Miss))
    }

    /// Removes every cache file in the directory.
    pub fn clear(&self) -> Result<usize> {
        let entries = match fs::read_dir(&self.dir) {
            Ok(e) => e,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(0),
            Err(e) => return Err(Error::Cache(e.to_string())),
        };
        let mut removed = 0;
        for entry in entries {
            let path = entry.map_err(|e| Error::Cache(e.to_string()))?.path();
            let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
            if name.starts_with("kflag-") && name.ends_with(".json") {
                fs::remove_file(&path).map_err(|e| Error::Cache(e.to_string()))?;
                removed += 1;
            }
        }
        Ok(removed)
    }
}
