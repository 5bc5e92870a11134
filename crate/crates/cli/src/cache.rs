//! Append-only JSON-lines cache of per-prime local data.
//!
//! Each line holds one record keyed by the canonical curve text and the
//! prime. Admissible residues are stored as hex bytes, fibres as
//! `[u, smallest root, root count]` triples. Lines that fail to parse or are
//! internally inconsistent are skipped with a warning, and the prime is then
//! recomputed by the caller.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use pseudopoints::arith::ResidueSet;
use pseudopoints::local::{Fiber, LocalCurveData};
use pseudopoints::poly::ReductionFlags;
use serde::{Deserialize, Serialize};

/// Environment variable naming the default cache directory.
pub const CACHE_DIR_ENV: &str = "PSEUDOPOINTS_CACHE_DIR";
const CACHE_FILE: &str = "local-data.jsonl";

#[derive(Debug, Serialize, Deserialize)]
struct Record {
    curve: String,
    p: u64,
    point_count: u64,
    admissible: String,
    witnesses: Vec<[u64; 3]>,
    flags: ReductionFlags,
}

impl Record {
    fn new(curve: &str, data: &LocalCurveData) -> Self {
        Record {
            curve: curve.to_string(),
            p: data.p,
            point_count: data.point_count,
            admissible: hex::encode(data.admissible.to_bytes()),
            witnesses: data
                .fibers
                .iter()
                .map(|f| [f.u, f.witness, f.count])
                .collect(),
            flags: data.flags,
        }
    }

    /// Rebuilds the record, rejecting anything the stored summary contradicts.
    fn into_data(self) -> Option<LocalCurveData> {
        let p = self.p;
        let fibers: Vec<Fiber> = self
            .witnesses
            .iter()
            .map(|&[u, witness, count]| Fiber { u, witness, count })
            .collect();
        let ordered = fibers.windows(2).all(|w| w[0].u < w[1].u);
        let in_range = fibers
            .iter()
            .all(|f| f.u < p && f.witness < p && (1..=p).contains(&f.count));
        if p < 2 || !ordered || !in_range {
            return None;
        }
        let admissible = ResidueSet::from_bytes(p, &hex::decode(&self.admissible).ok()?)?;
        let data = LocalCurveData::from_fibers(p, fibers, self.flags);
        (data.admissible == admissible && data.point_count == self.point_count).then_some(data)
    }
}

/// Cache path from an explicit flag, else from the environment.
pub fn resolve_path(flag: Option<&Path>) -> Option<PathBuf> {
    flag.map(Path::to_path_buf).or_else(|| {
        std::env::var_os(CACHE_DIR_ENV)
            .filter(|dir| !dir.is_empty())
            .map(|dir| PathBuf::from(dir).join(CACHE_FILE))
    })
}

#[derive(Debug, Default)]
pub struct LocalCache {
    path: Option<PathBuf>,
    entries: BTreeMap<(String, u64), LocalCurveData>,
    pending: Vec<Record>,
    warnings: usize,
}

impl LocalCache {
    /// A cache that stores nothing.
    pub fn disabled() -> Self {
        Self::default()
    }

    /// Loads every valid line of `path`; a missing file is an empty cache.
    pub fn open(path: &Path) -> io::Result<Self> {
        let mut cache = LocalCache {
            path: Some(path.to_path_buf()),
            ..Self::default()
        };
        let file = match File::open(path) {
            Ok(file) => file,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(cache),
            Err(e) => return Err(e),
        };
        for (index, line) in BufReader::new(file).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let parsed = serde_json::from_str::<Record>(&line)
                .ok()
                .and_then(|r| Some((r.curve.clone(), r.into_data()?)));
            match parsed {
                Some((curve, data)) => {
                    cache.entries.insert((curve, data.p), data);
                }
                None => {
                    log::warn!(
                        "{}:{}: skipping corrupt cache line",
                        path.display(),
                        index + 1
                    );
                    cache.warnings += 1;
                }
            }
        }
        Ok(cache)
    }

    /// Number of corrupt lines skipped while loading.
    pub fn warnings(&self) -> usize {
        self.warnings
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, curve: &str, p: u64) -> Option<&LocalCurveData> {
        self.entries.get(&(curve.to_string(), p))
    }

    /// Every record for `curve`, by increasing prime.
    pub fn records(&self, curve: &str) -> Vec<LocalCurveData> {
        self.entries
            .iter()
            .filter(|((c, _), _)| c == curve)
            .map(|(_, d)| d.clone())
            .collect()
    }

    pub fn insert(&mut self, curve: &str, data: LocalCurveData) {
        if self.path.is_some() {
            self.pending.push(Record::new(curve, &data));
        }
        self.entries.insert((curve.to_string(), data.p), data);
    }

    /// Appends the records inserted since the last flush.
    pub fn flush(&mut self) -> io::Result<()> {
        let Some(path) = &self.path else {
            return Ok(());
        };
        if self.pending.is_empty() {
            return Ok(());
        }
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        let mut out = io::BufWriter::new(OpenOptions::new().create(true).append(true).open(path)?);
        for record in self.pending.drain(..) {
            serde_json::to_writer(&mut out, &record)?;
            out.write_all(b"\n")?;
        }
        out.flush()
    }
}

/// Writes `records` for `curve` to the cache at `path`.
pub fn store(path: &Path, curve: &str, records: &[LocalCurveData]) -> io::Result<()> {
    let mut cache = LocalCache::open(path)?;
    for data in records {
        cache.insert(curve, data.clone());
    }
    cache.flush()
}

/// Records for `curve` stored at `path`, with the number of corrupt lines skipped.
pub fn load(path: &Path, curve: &str) -> io::Result<(Vec<LocalCurveData>, usize)> {
    let cache = LocalCache::open(path)?;
    Ok((cache.records(curve), cache.warnings()))
}
