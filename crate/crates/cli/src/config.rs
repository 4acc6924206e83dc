//! Experiment configuration: a flat JSON object whose fields mirror the
//! command-line flags.

use std::path::PathBuf;

use ccproto::protocols::fault::FaultPlan;
use ccproto::protocols::schedule::{
    check_adaptive_domain, check_exists_domain, check_rewind_domain, check_simple_domain, DomainPolicy,
};
use ccproto::reductions::perfect_hash::MAX_UNIVERSE_BITS;
use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ProtocolId {
    Dimreduce,
    SimpleEt,
    ExistsEq,
    RewindEt,
    AdaptiveEt,
    Setint,
}

impl ProtocolId {
    pub fn name(self) -> &'static str {
        match self {
            ProtocolId::Dimreduce => "dimreduce",
            ProtocolId::SimpleEt => "simple-et",
            ProtocolId::ExistsEq => "exists-eq",
            ProtocolId::RewindEt => "rewind-et",
            ProtocolId::AdaptiveEt => "adaptive-et",
            ProtocolId::Setint => "setint",
        }
    }
}

/// Which coordinates of a generated instance are equal. For `setint` the
/// count of planted common elements is `overlap` instead.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum InstanceKind {
    #[default]
    Unequal,
    Equal,
    /// One equal coordinate at a seed-chosen position.
    Planted,
    /// Each coordinate equal with probability 1/2.
    Random,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Policy {
    Strict,
    #[default]
    Relaxed,
}

impl From<Policy> for DomainPolicy {
    fn from(p: Policy) -> Self {
        match p {
            Policy::Strict => DomainPolicy::Strict,
            Policy::Relaxed => DomainPolicy::Relaxed,
        }
    }
}

fn default_coord_bits() -> u32 {
    32
}
fn default_trials() -> u64 {
    1000
}
fn default_c() -> u64 {
    ccproto::protocols::rewind::DEFAULT_BUDGET_FACTOR
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub protocol: ProtocolId,
    pub k: usize,
    pub r: u32,
    #[serde(rename = "E")]
    pub e: u64,
    #[serde(default = "default_coord_bits")]
    pub coord_bits: u32,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default)]
    pub seed: u64,
    /// Worker threads; 0 or absent means all cores.
    #[serde(default)]
    pub threads: usize,
    #[serde(default)]
    pub instance: InstanceKind,
    /// Planted common elements for `setint`.
    #[serde(default)]
    pub overlap: usize,
    /// Rewind budget factor c (meter limit c*E).
    #[serde(default = "default_c")]
    pub c: u64,
    #[serde(default)]
    pub policy: Policy,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub fault_plan: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(protocol: ProtocolId, k: usize, r: u32, e: u64) -> Self {
        ExperimentConfig {
            protocol,
            k,
            r,
            e,
            coord_bits: default_coord_bits(),
            trials: default_trials(),
            seed: 0,
            threads: 0,
            instance: InstanceKind::default(),
            overlap: 0,
            c: default_c(),
            policy: Policy::default(),
            out: None,
            fault_plan: None,
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| HarnessError::Usage(format!("config: {e}")))
    }

    pub fn run_id(&self) -> String {
        format!("{}-k{}-r{}-E{}-s{}", self.protocol.name(), self.k, self.r, self.e, self.seed)
    }

    pub fn load_fault_plan(&self) -> Result<FaultPlan> {
        match &self.fault_plan {
            None => Ok(FaultPlan::none()),
            Some(p) => {
                let text = std::fs::read_to_string(p)?;
                FaultPlan::from_json(&text).map_err(|e| HarnessError::Usage(e.to_string()))
            }
        }
    }

    /// Rejects configurations outside the protocol's parameter domain.
    pub fn validate(&self) -> Result<()> {
        let usage = |m: String| Err(HarnessError::Usage(m));
        if self.trials == 0 {
            return usage("trials must be at least 1".into());
        }
        if self.k == 0 || self.e == 0 || self.r == 0 {
            return usage("k, r and E must be at least 1".into());
        }
        if self.coord_bits == 0 || self.coord_bits > 64 {
            return usage(format!("coord_bits {} not in 1..=64", self.coord_bits));
        }
        let k0 = (self.k as u64).min(self.e);
        let policy = self.policy.into();
        let checked = match self.protocol {
            ProtocolId::Dimreduce => Ok(()),
            ProtocolId::SimpleEt => check_simple_domain(k0, self.r, policy),
            ProtocolId::ExistsEq => check_exists_domain(k0, self.e.max(k0), self.r, policy),
            ProtocolId::RewindEt => check_rewind_domain(k0, self.r, policy),
            ProtocolId::AdaptiveEt => check_adaptive_domain(k0, self.r, policy),
            ProtocolId::Setint => {
                if self.coord_bits > MAX_UNIVERSE_BITS {
                    return usage(format!("setint needs coord_bits <= {MAX_UNIVERSE_BITS}"));
                }
                if self.overlap > self.k {
                    return usage("overlap exceeds k".into());
                }
                check_simple_domain(k0, self.r, policy)
            }
        };
        checked.map_err(|e| HarnessError::Usage(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_defaults_and_names() {
        let c = ExperimentConfig::from_json(r#"{"protocol":"exists-eq","k":16,"r":2,"E":16}"#).unwrap();
        assert_eq!(c.protocol, ProtocolId::ExistsEq);
        assert_eq!(c.trials, 1000);
        assert!(ExperimentConfig::from_json(r#"{"protocol":"nope","k":1,"r":1,"E":1}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"protocol":"setint","k":1,"r":1,"E":1,"bogus":1}"#).is_err());
    }
}
