//! Append-only JSON-lines store of per-class heights, keyed by `(p, q)`.
//!
//! Each line is either a class record
//! `{"p","q","class","r","A","witness_k","witness_value"}` or a summary record
//! `{"p","q","M"}` written once every class of a pair is done. Lines that fail to
//! parse are skipped on load, so a run killed mid-write still resumes.

use std::collections::{BTreeMap, HashMap};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassRecord {
    pub p: u64,
    pub q: u64,
    pub class: u64,
    pub r: u64,
    #[serde(rename = "A")]
    pub a: u64,
    pub witness_k: u64,
    pub witness_value: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SummaryRecord {
    pub p: u64,
    pub q: u64,
    #[serde(rename = "M")]
    pub m: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CacheLine {
    Class(ClassRecord),
    Summary(SummaryRecord),
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Cache(format!("{}: {e}", path.display()))
}

fn ends_without_newline(path: &Path) -> bool {
    let Ok(mut f) = File::open(path) else { return false };
    let mut last = [0u8];
    f.seek(SeekFrom::End(-1)).is_ok() && f.read_exact(&mut last).is_ok() && last[0] != b'\n'
}

#[derive(Debug)]
pub struct FamilyCache {
    path: PathBuf,
    classes: HashMap<(u64, u64), BTreeMap<u64, ClassRecord>>,
    summaries: HashMap<(u64, u64), u64>,
    skipped: usize,
    writer: Mutex<BufWriter<File>>,
}

impl FamilyCache {
    /// Loads every readable record from `path` (created if missing) and opens it for appending.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut classes: HashMap<(u64, u64), BTreeMap<u64, ClassRecord>> = HashMap::new();
        let mut summaries = HashMap::new();
        let mut skipped = 0;
        if path.exists() {
            let file = File::open(&path).map_err(|e| io_err(&path, e))?;
            for line in BufReader::new(file).lines() {
                let line = line.map_err(|e| io_err(&path, e))?;
                if line.trim().is_empty() {
                    continue;
                }
                match serde_json::from_str::<CacheLine>(&line) {
                    Ok(CacheLine::Class(rec)) => {
                        classes.entry((rec.p, rec.q)).or_default().insert(rec.class, rec);
                    }
                    Ok(CacheLine::Summary(s)) => {
                        summaries.insert((s.p, s.q), s.m);
                    }
                    Err(e) => {
                        log::warn!("skipping malformed cache line in {}: {e}", path.display());
                        skipped += 1;
                    }
                }
            }
        }
        let torn = ends_without_newline(&path);
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .map_err(|e| io_err(&path, e))?;
        if torn {
            // terminate a half-written last line so the next record starts clean
            file.write_all(b"\n").map_err(|e| io_err(&path, e))?;
        }
        Ok(FamilyCache {
            path,
            classes,
            summaries,
            skipped,
            writer: Mutex::new(BufWriter::new(file)),
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Number of lines ignored while loading.
    pub fn skipped_lines(&self) -> usize {
        self.skipped
    }

    /// Class records present when the cache was opened.
    pub fn classes(&self, p: u64, q: u64) -> Option<&BTreeMap<u64, ClassRecord>> {
        self.classes.get(&(p, q))
    }

    pub fn summary(&self, p: u64, q: u64) -> Option<u64> {
        self.summaries.get(&(p, q)).copied()
    }

    fn append(&self, line: &CacheLine) -> Result<()> {
        let json = serde_json::to_string(line).map_err(|e| io_err(&self.path, e))?;
        let mut w = self.writer.lock().map_err(|_| Error::Cache("writer poisoned".into()))?;
        writeln!(w, "{json}").map_err(|e| io_err(&self.path, e))?;
        w.flush().map_err(|e| io_err(&self.path, e))
    }

    pub fn append_class(&self, rec: &ClassRecord) -> Result<()> {
        self.append(&CacheLine::Class(rec.clone()))
    }

    pub fn append_summary(&self, p: u64, q: u64, m: u64) -> Result<()> {
        self.append(&CacheLine::Summary(SummaryRecord { p, q, m }))
    }
}
