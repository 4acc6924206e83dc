//! Fault plans for the rewind protocol. A fault fires on a given execution
//! of a given phase and flips chosen bits of one party's state.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Refute,
    Verify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    /// Refute: Alice's decoded copy of Bob's phase bits. Verify: Alice's
    /// post-stage segment.
    AliceView,
    /// Same for Bob.
    BobView,
    /// Alice's history digest, both her copy and the one she sends.
    Digest,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fault {
    pub stage: Stage,
    pub phase: usize,
    /// 0 = first execution of (stage, phase).
    #[serde(default)]
    pub occurrence: usize,
    pub target: Target,
    /// Bit positions, reduced modulo the target length; ignored when the
    /// target is empty.
    pub flips: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaultPlan {
    pub faults: Vec<Fault>,
}

impl FaultPlan {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("fault plan: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn matching(&self, stage: Stage, phase: usize, occurrence: usize) -> impl Iterator<Item = &Fault> {
        self.faults
            .iter()
            .filter(move |f| f.stage == stage && f.phase == phase && f.occurrence == occurrence)
    }
}

pub(crate) fn apply_flips(bits: &mut crate::bits::BitString, flips: &[usize]) {
    if bits.is_empty() {
        return;
    }
    for &f in flips {
        bits.flip(f % bits.len());
    }
}
