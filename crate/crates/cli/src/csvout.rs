//! The results CSV. Columns are fixed; `notes` holds `key=value` pairs
//! separated by ';' and always starts with the schema version.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::experiment::MonteCarloResult;

pub const SCHEMA_VERSION: u32 = 1;

pub const COLUMNS: [&str; 13] = [
    "run_id",
    "protocol",
    "k",
    "r",
    "E",
    "coord_bits",
    "seed",
    "bits_total",
    "rounds_merged",
    "rounds_raw",
    "failures",
    "trials",
    "notes",
];

/// Cost columns are per-trial means.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub run_id: String,
    pub protocol: String,
    pub k: usize,
    pub r: u32,
    #[serde(rename = "E")]
    pub e: u64,
    pub coord_bits: u32,
    pub seed: u64,
    pub bits_total: f64,
    pub rounds_merged: f64,
    pub rounds_raw: f64,
    pub failures: u64,
    pub trials: u64,
    pub notes: String,
}

impl CsvRow {
    pub fn from_result(cfg: &ExperimentConfig, res: &MonteCarloResult) -> Self {
        let phase_bits: Vec<String> = res.phase_bits.iter().map(|(t, b)| format!("{t}:{b}")).collect();
        let notes = [
            format!("schema={SCHEMA_VERSION}"),
            format!("instance={}", serde_json::to_string(&cfg.instance).unwrap_or_default().trim_matches('"')),
            format!("estimate={:e}", res.estimate.estimate),
            format!("ci_lo={:e}", res.estimate.ci_lo),
            format!("ci_hi={:e}", res.estimate.ci_hi),
            format!("one_sided_violations={}", res.one_sided_violations),
            format!("sd_bits={:.3}", res.sd_bits),
            format!("test_volume={}", res.mean_test_volume),
            format!("phase_bits={}", phase_bits.join("|")),
        ]
        .join(";");
        CsvRow {
            run_id: cfg.run_id(),
            protocol: cfg.protocol.name().into(),
            k: cfg.k,
            r: cfg.r,
            e: cfg.e,
            coord_bits: cfg.coord_bits,
            seed: cfg.seed,
            bits_total: res.mean_bits,
            rounds_merged: res.mean_rounds_merged,
            rounds_raw: res.mean_rounds_raw,
            failures: res.estimate.failures,
            trials: res.estimate.trials,
            notes,
        }
    }

    pub fn note(&self, key: &str) -> Option<&str> {
        self.notes.split(';').find_map(|kv| kv.strip_prefix(key)?.strip_prefix('='))
    }
}

pub fn write_rows(path: &Path, rows: &[CsvRow]) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_rows(path: &Path) -> Result<Vec<CsvRow>> {
    let mut rd = csv::Reader::from_path(path)?;
    let rows = rd.deserialize().collect::<std::result::Result<Vec<CsvRow>, _>>()?;
    Ok(rows)
}
