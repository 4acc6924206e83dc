//! One-constant scaling fits. The constant is the least-squares fit in log
//! space (the geometric mean of measured / model); the residual of a point
//! is |measured - a*model| / (a*model).

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    /// E k^(1/r)
    EkRoot,
    /// r E k^(1/r)
    REkRoot,
    /// k + E k^(1/r) log r + E r log r, log r clamped to at least 1
    Adaptive,
}

impl Model {
    pub fn value(self, k: f64, r: f64, e: f64) -> f64 {
        let root = k.powf(1.0 / r);
        match self {
            Model::EkRoot => e * root,
            Model::REkRoot => r * e * root,
            Model::Adaptive => {
                let lr = r.log2().max(1.0);
                k + e * root * lr + e * r * lr
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingPoint {
    pub k: f64,
    pub r: f64,
    pub e: f64,
    pub measured: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub model: Model,
    pub a: f64,
    pub residuals: Vec<f64>,
    pub max_rel_residual: f64,
}

pub fn fit_scaling(points: &[ScalingPoint], model: Model) -> Result<Fit> {
    if points.len() < 4 {
        return Err(HarnessError::Usage(format!("a fit needs at least 4 points, got {}", points.len())));
    }
    let mut logs = Vec::with_capacity(points.len());
    for p in points {
        let m = model.value(p.k, p.r, p.e);
        if !(m > 0.0 && m.is_finite() && p.measured > 0.0) {
            return Err(HarnessError::Assertion(format!("singular fit at {p:?}")));
        }
        logs.push((p.measured / m).ln());
    }
    let a = (logs.iter().sum::<f64>() / logs.len() as f64).exp();
    let residuals: Vec<f64> = points
        .iter()
        .map(|p| {
            let pred = a * model.value(p.k, p.r, p.e);
            (p.measured - pred).abs() / pred
        })
        .collect();
    let max_rel_residual = residuals.iter().copied().fold(0.0, f64::max);
    Ok(Fit {
        model,
        a,
        residuals,
        max_rel_residual,
    })
}
