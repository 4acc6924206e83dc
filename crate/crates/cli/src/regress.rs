//! Golden-file regression: a fixed set of small runs whose transcripts (and
//! one CONGEST run's outputs) must stay bit-identical.

use std::path::{Path, PathBuf};

use ccproto::protocols::fault::FaultPlan;
use ccproto_congest::{enumerate_triangles, CongestConfig, Graph};

use crate::config::{ExperimentConfig, InstanceKind, ProtocolId};
use crate::error::Result;
use crate::experiment::run_trial_detail;

pub fn default_golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("golden")
}

fn case(protocol: ProtocolId, k: usize, r: u32, e: u64, instance: InstanceKind) -> ExperimentConfig {
    let mut c = ExperimentConfig::new(protocol, k, r, e);
    c.seed = 1;
    c.coord_bits = 20;
    c.instance = instance;
    c
}

pub fn golden_cases() -> Vec<(String, ExperimentConfig)> {
    let mut setint = case(ProtocolId::Setint, 16, 2, 10, InstanceKind::Unequal);
    setint.overlap = 4;
    vec![
        ("simple-et".into(), case(ProtocolId::SimpleEt, 16, 2, 10, InstanceKind::Random)),
        ("exists-eq".into(), case(ProtocolId::ExistsEq, 16, 2, 16, InstanceKind::Planted)),
        ("rewind-et".into(), case(ProtocolId::RewindEt, 16, 2, 10, InstanceKind::Random)),
        ("adaptive-et".into(), case(ProtocolId::AdaptiveEt, 16, 2, 10, InstanceKind::Random)),
        ("dimreduce".into(), case(ProtocolId::Dimreduce, 256, 1, 16, InstanceKind::Random)),
        ("setint".into(), setint),
    ]
}

/// (file name, contents) of every golden artifact.
pub fn render_all() -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (name, cfg) in golden_cases() {
        let d = run_trial_detail(&cfg, &FaultPlan::none(), 0)?;
        out.push((format!("{name}.transcript.json"), d.transcript.to_json()));
    }
    let g = Graph::gnp(64, 0.15, 3);
    let run = enumerate_triangles(&g, &CongestConfig::default(), 3)?;
    out.push(("congest.stats.json".into(), run.stats_json()));
    out.push(("congest.triangles.csv".into(), run.triangles_csv()));
    Ok(out)
}

#[derive(Clone, Debug, Default)]
pub struct RegressReport {
    pub checked: usize,
    pub mismatched: Vec<String>,
    pub missing: Vec<String>,
}

pub fn regress(dir: &Path, bless: bool) -> Result<RegressReport> {
    let mut rep = RegressReport::default();
    if bless {
        std::fs::create_dir_all(dir)?;
    }
    for (name, contents) in render_all()? {
        let path = dir.join(&name);
        rep.checked += 1;
        if bless {
            std::fs::write(&path, contents)?;
            continue;
        }
        match std::fs::read_to_string(&path) {
            Ok(old) if old == contents => {}
            Ok(_) => rep.mismatched.push(name),
            Err(_) => rep.missing.push(name),
        }
    }
    Ok(rep)
}
