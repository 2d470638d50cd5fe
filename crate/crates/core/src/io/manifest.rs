//! Text manifests: the per-survey ping index and the run manifest.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::binary::{read_all, write_all};
use crate::error::{Error, Result};

/// One line of the survey index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexEntry {
    pub file: String,
    pub ping_index: usize,
    pub location_index: usize,
    pub tx_id: usize,
    pub seed: u64,
}

pub fn write_index(path: &Path, scenario_hash: u64, entries: &[IndexEntry]) -> Result<()> {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "# scenario_hash={scenario_hash:016x} pings={}",
        entries.len()
    );
    let _ = writeln!(s, "# file ping location tx seed");
    for e in entries {
        let _ = writeln!(
            s,
            "{} {} {} {} {}",
            e.file, e.ping_index, e.location_index, e.tx_id, e.seed
        );
    }
    write_all(path, s.as_bytes())
}

pub fn read_index(path: &Path) -> Result<Vec<IndexEntry>> {
    let text = String::from_utf8(read_all(path)?)
        .map_err(|_| Error::format(path, "index is not UTF-8"))?;
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || Error::format(path, format!("line {}: malformed entry", n + 1));
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 5 {
            return Err(bad());
        }
        out.push(IndexEntry {
            file: f[0].to_string(),
            ping_index: f[1].parse().map_err(|_| bad())?,
            location_index: f[2].parse().map_err(|_| bad())?,
            tx_id: f[3].parse().map_err(|_| bad())?,
            seed: f[4].parse().map_err(|_| bad())?,
        });
    }
    Ok(out)
}

/// What a command consumed and produced.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub scenario_hash: u64,
    pub tool_version: String,
    pub command: String,
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
    pub seed: u64,
    pub wall_time_s: f64,
}

impl RunManifest {
    pub fn new(command: &str, scenario_hash: u64, seed: u64) -> Self {
        RunManifest {
            scenario_hash,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            seed,
            wall_time_s: 0.0,
        }
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command={}", self.command);
        let _ = writeln!(s, "tool_version={}", self.tool_version);
        let _ = writeln!(s, "scenario_hash={:016x}", self.scenario_hash);
        let _ = writeln!(s, "seed={}", self.seed);
        let _ = writeln!(s, "wall_time_s={:.3}", self.wall_time_s);
        for p in &self.inputs {
            let _ = writeln!(s, "input={}", p.display());
        }
        for p in &self.outputs {
            let _ = writeln!(s, "output={}", p.display());
        }
        s
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_all(path, self.render().as_bytes())
    }
}
