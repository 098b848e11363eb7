//! On-disk read-through cache of class-group structures.
//!
//! CSV with header `disc,h,invariant_factors`, one row per discriminant,
//! rows in ascending `|D|`, e.g. `-4027,9,3;3`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use crate::abelian::AbelianGroup;
use crate::error::{Error, Result};
use crate::forms::{class_group, Discriminant};

pub const HEADER: [&str; 3] = ["disc", "h", "invariant_factors"];

#[derive(Debug, Clone, Default)]
pub struct ClassGroupCache {
    path: Option<PathBuf>,
    /// Keyed by `|D|` so iteration is in canonical order.
    entries: BTreeMap<u64, AbelianGroup>,
    dirty: bool,
}

impl ClassGroupCache {
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Loads the cache at `path`; a missing file is an empty cache.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut cache = ClassGroupCache {
            path: Some(path.clone()),
            ..Self::default()
        };
        if !path.exists() {
            return Ok(cache);
        }
        let mut reader = csv::Reader::from_path(&path)?;
        if reader.headers()?.iter().ne(HEADER) {
            return Err(Error::InvalidArgument(format!(
                "{} is not a class-group cache (expected header {})",
                path.display(),
                HEADER.join(",")
            )));
        }
        for row in reader.records() {
            let row = row?;
            let bad = || Error::InvalidArgument(format!("malformed cache row {row:?}"));
            let disc: i64 = row.get(0).and_then(|s| s.parse().ok()).ok_or_else(bad)?;
            let h: u64 = row.get(1).and_then(|s| s.parse().ok()).ok_or_else(bad)?;
            let group: AbelianGroup = row.get(2).ok_or_else(bad)?.parse()?;
            Discriminant::new(disc)?;
            if group.order() != h {
                return Err(bad());
            }
            cache.entries.insert(disc.unsigned_abs(), group);
        }
        Ok(cache)
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, d: Discriminant) -> Option<&AbelianGroup> {
        self.entries.get(&d.abs())
    }

    pub fn insert(&mut self, d: Discriminant, group: AbelianGroup) {
        if self.entries.insert(d.abs(), group.clone()).as_ref() != Some(&group) {
            self.dirty = true;
        }
    }

    /// The structure of `CL(D)`, computed and remembered on a miss.
    pub fn structure(&mut self, d: Discriminant) -> Result<AbelianGroup> {
        if let Some(g) = self.get(d) {
            return Ok(g.clone());
        }
        let g = class_group(d)?.structure().clone();
        self.insert(d, g.clone());
        Ok(g)
    }

    /// Writes the cache back if anything was added since it was loaded.
    pub fn save(&mut self) -> Result<()> {
        let Some(path) = &self.path else {
            return Ok(());
        };
        if !self.dirty {
            return Ok(());
        }
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        // write to a sibling file and rename, so a crash never truncates the cache
        let tmp = path.with_extension("csv.tmp");
        {
            let mut w = csv::Writer::from_path(&tmp)?;
            w.write_record(HEADER)?;
            for (abs, g) in &self.entries {
                w.write_record([
                    format!("-{abs}"),
                    g.order().to_string(),
                    g.chain_string(),
                ])?;
            }
            w.flush()?;
        }
        fs::rename(&tmp, path)?;
        self.dirty = false;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.csv");
        let mut c = ClassGroupCache::open(&path).unwrap();
        assert!(c.is_empty());
        let g = c.structure(Discriminant::new(-4027).unwrap()).unwrap();
        assert_eq!(g.chain_string(), "3;3");
        c.structure(Discriminant::new(-3).unwrap()).unwrap();
        c.save().unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(text, "disc,h,invariant_factors\n-3,1,\n-4027,9,3;3\n");
        let c2 = ClassGroupCache::open(&path).unwrap();
        assert_eq!(c2.len(), 2);
        assert_eq!(c2.get(Discriminant::new(-4027).unwrap()), Some(&g));
    }

    #[test]
    fn rejects_foreign_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.csv");
        fs::write(&path, "a,b\n1,2\n").unwrap();
        assert!(ClassGroupCache::open(&path).is_err());
        fs::write(&path, "disc,h,invariant_factors\n-23,4,3\n").unwrap();
        assert!(ClassGroupCache::open(&path).is_err());
    }
}
