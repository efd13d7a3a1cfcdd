//! On-disk layout: `<out>/<suite>/<case>/<timestamp>/` holding the files of one run.
//! Directories are only ever added, never rewritten.

use std::fs;
use std::io::ErrorKind;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

pub const RUN_FILE: &str = "run.json";
pub const COUNTS_FILE: &str = "counts.json";
pub const VERDICT_FILE: &str = "verdict.json";
pub const ORACLE_FILE: &str = "oracle.json";
pub const CIRCUIT_FILE: &str = "circuit.qasm";

/// Wall-clock data kept apart so the other fields stay reproducible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMeta {
    pub started: String,
    pub finished: String,
    pub tool_version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub case: String,
    pub suite: String,
    pub backend: String,
    pub shots: u64,
    pub seed: Option<u64>,
    pub params: serde_json::Value,
    /// Counts file, relative to the record's directory.
    pub counts_file: String,
    pub verdict: String,
    pub color: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub route: Option<serde_json::Value>,
    pub meta: RunMeta,
}

/// Compact UTC timestamp usable as a directory name (ISO 8601 basic form).
pub fn stamp(t: chrono::DateTime<chrono::Utc>) -> String {
    t.format("%Y%m%dT%H%M%S%.6fZ").to_string()
}

pub fn iso(t: chrono::DateTime<chrono::Utc>) -> String {
    t.to_rfc3339_opts(chrono::SecondsFormat::Micros, true)
}

/// Creates a fresh run directory, adding a suffix if the stamp is taken.
pub fn new_run_dir(out: &Path, suite: &str, case: &str, stamp: &str) -> Result<PathBuf> {
    let parent = out.join(suite).join(case);
    fs::create_dir_all(&parent).with_context(|| format!("creating {}", parent.display()))?;
    for n in 0.. {
        let dir = if n == 0 { parent.join(stamp) } else { parent.join(format!("{stamp}-{n}")) };
        match fs::create_dir(&dir) {
            Ok(()) => return Ok(dir),
            Err(e) if e.kind() == ErrorKind::AlreadyExists => continue,
            Err(e) => return Err(e).with_context(|| format!("creating {}", dir.display())),
        }
    }
    unreachable!("unbounded suffix search")
}

pub fn write(dir: &Path, name: &str, contents: &str) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))
}

pub fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write(dir, name, &text)
}

/// Every `run.json` below `root`, with its directory.
pub fn load_history(root: &Path) -> Result<Vec<(PathBuf, RunRecord)>> {
    let mut found = Vec::new();
    if !root.is_dir() {
        return Ok(found);
    }
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in fs::read_dir(&dir).with_context(|| format!("reading {}", dir.display()))? {
            let path = entry?.path();
            if path.is_dir() {
                stack.push(path);
            } else if path.file_name().is_some_and(|n| n == RUN_FILE) {
                let text = fs::read_to_string(&path)?;
                let record: RunRecord =
                    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
                found.push((dir.clone(), record));
            }
        }
    }
    found.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(found)
}
