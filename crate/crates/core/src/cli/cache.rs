//! Append-only JSON-lines cache of `nu(p^e)` values.
//!
//! One [`CacheRecord`] per line. Readers never lock; writers take an exclusive
//! lock on the file before appending, and give up (without persisting) if the
//! lock cannot be had within [`LOCK_TIMEOUT`].

use std::collections::HashMap;
use std::fs::{self, File, OpenOptions, TryLockError};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::thread;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fedder::nu;
use crate::poly::Polynomial;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const LOCK_TIMEOUT: Duration = Duration::from_secs(2);
pub const CACHE_ENV: &str = "FPTLAB_CACHE";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub p: u64,
    pub poly: String,
    pub e: u32,
    pub nu: u64,
    pub tool_version: String,
}

type Key = (u64, String, u32);

fn key_of(f: &Polynomial, e: u32) -> Key {
    (f.p().get(), f.to_string(), e)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CacheEvent {
    Hit,
    Computed { persisted: bool },
}

#[derive(Debug)]
pub struct NuCache {
    path: PathBuf,
    records: HashMap<Key, u64>,
    /// Problems met while reading or writing; never fatal.
    pub warnings: Vec<String>,
}

/// `$FPTLAB_CACHE`, else `$XDG_CACHE_HOME/fptlab/nu.jsonl`, else `~/.cache/fptlab/nu.jsonl`.
pub fn default_cache_path() -> Option<PathBuf> {
    let from_env = |name: &str| std::env::var_os(name).filter(|v| !v.is_empty()).map(PathBuf::from);
    if let Some(path) = from_env(CACHE_ENV) {
        return Some(path);
    }
    let base = from_env("XDG_CACHE_HOME").or_else(|| from_env("HOME").map(|h| h.join(".cache")))?;
    Some(base.join("fptlab").join("nu.jsonl"))
}

fn read_records(path: &Path, warnings: &mut Vec<String>) -> io::Result<HashMap<Key, u64>> {
    let mut records = HashMap::new();
    let file = match File::open(path) {
        Ok(file) => file,
        Err(err) if err.kind() == io::ErrorKind::NotFound => return Ok(records),
        Err(err) => return Err(err),
    };
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = match line {
            Ok(line) => line,
            Err(err) => {
                warnings.push(format!("{}:{}: unreadable line skipped: {err}", path.display(), i + 1));
                continue;
            }
        };
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<CacheRecord>(&line) {
            Ok(r) if r.tool_version == TOOL_VERSION => {
                records.entry((r.p, r.poly, r.e)).or_insert(r.nu);
            }
            Ok(_) => {}
            Err(err) => warnings.push(format!("{}:{}: corrupt cache line skipped: {err}", path.display(), i + 1)),
        }
    }
    Ok(records)
}

impl NuCache {
    pub fn open(path: impl Into<PathBuf>) -> io::Result<Self> {
        let path = path.into();
        let mut warnings = Vec::new();
        let records = read_records(&path, &mut warnings)?;
        Ok(NuCache { path, records, warnings })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn lookup(&self, f: &Polynomial, e: u32) -> Option<u64> {
        self.records.get(&key_of(f, e)).copied()
    }

    /// Appends a record under an exclusive lock. Returns whether it was written.
    pub fn store(&mut self, f: &Polynomial, e: u32, value: u64) -> bool {
        let key = key_of(f, e);
        match self.append(&key, value) {
            Ok(written) => {
                self.records.insert(key, value);
                written
            }
            Err(err) => {
                self.warnings
                    .push(format!("{}: result not cached: {err}", self.path.display()));
                self.records.insert(key, value);
                false
            }
        }
    }

    fn append(&mut self, key: &Key, value: u64) -> io::Result<bool> {
        if let Some(dir) = self.path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        let mut file = OpenOptions::new().create(true).append(true).open(&self.path)?;
        let start = Instant::now();
        loop {
            match file.try_lock() {
                Ok(()) => break,
                Err(TryLockError::WouldBlock) if start.elapsed() < LOCK_TIMEOUT => {
                    thread::sleep(Duration::from_millis(10));
                }
                Err(TryLockError::WouldBlock) => {
                    self.warnings.push(format!(
                        "{}: lock timeout, result not cached",
                        self.path.display()
                    ));
                    return Ok(false);
                }
                Err(TryLockError::Error(err)) => return Err(err),
            }
        }
        // another writer may have stored the same key since we read the file
        let mut ignored = Vec::new();
        if read_records(&self.path, &mut ignored)?.contains_key(key) {
            return Ok(false);
        }
        let record = CacheRecord {
            p: key.0,
            poly: key.1.clone(),
            e: key.2,
            nu: value,
            tool_version: TOOL_VERSION.to_string(),
        };
        let mut line = serde_json::to_string(&record).map_err(io::Error::other)?;
        line.push('\n');
        file.write_all(line.as_bytes())?;
        file.flush()?;
        Ok(true)
    }
}

/// Cached `nu(p^e)`, computing with `compute` on a miss.
pub fn cache_lookup_or_compute_with<F>(
    f: &Polynomial,
    e: u32,
    cache: &mut NuCache,
    compute: F,
) -> Result<(u64, CacheEvent)>
where
    F: FnOnce() -> Result<u64>,
{
    if let Some(value) = cache.lookup(f, e) {
        return Ok((value, CacheEvent::Hit));
    }
    let value = compute()?;
    let persisted = cache.store(f, e, value);
    Ok((value, CacheEvent::Computed { persisted }))
}

/// Cached `nu(p^e)`, computing by binary search on a miss.
pub fn cache_lookup_or_compute(f: &Polynomial, e: u32, cache: &mut NuCache) -> Result<(u64, CacheEvent)> {
    cache_lookup_or_compute_with(f, e, cache, || nu(f, e))
}
