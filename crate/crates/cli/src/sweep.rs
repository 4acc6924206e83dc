//! Parameter sweeps over (k, r, E) and their CSV rows.

use crate::config::ExperimentConfig;
use crate::csvout::CsvRow;
use crate::error::Result;
use crate::experiment::{monte_carlo_error, MonteCarloResult};
use crate::fit::ScalingPoint;

pub fn cost_sweep(base: &ExperimentConfig, grid: &[(usize, u32, u64)]) -> Result<Vec<(ExperimentConfig, MonteCarloResult)>> {
    grid.iter()
        .map(|&(k, r, e)| {
            let cfg = ExperimentConfig { k, r, e, ..base.clone() };
            let res = monte_carlo_error(&cfg)?;
            Ok((cfg, res))
        })
        .collect()
}

pub fn sweep_rows(points: &[(ExperimentConfig, MonteCarloResult)]) -> Vec<CsvRow> {
    points.iter().map(|(c, r)| CsvRow::from_result(c, r)).collect()
}

/// (k, r, E, mean bits) from CSV rows.
pub fn scaling_points(rows: &[CsvRow]) -> Vec<ScalingPoint> {
    rows.iter()
        .map(|r| ScalingPoint {
            k: r.k as f64,
            r: r.r as f64,
            e: r.e as f64,
            measured: r.bits_total,
        })
        .collect()
}

/// Parses "1,2,4" into a list of r values.
pub fn parse_list<T: std::str::FromStr>(s: &str) -> Option<Vec<T>> {
    s.split(',').map(|t| t.trim().parse().ok()).collect()
}
