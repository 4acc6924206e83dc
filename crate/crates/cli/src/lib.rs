//! Experiment harness: Monte Carlo error estimates with exact confidence
//! intervals, cost sweeps, scaling fits, golden-file regression and the
//! command-line front end.

pub mod config;
pub mod csvout;
pub mod error;
pub mod experiment;
pub mod fit;
pub mod regress;
pub mod stats;
pub mod sweep;

pub use config::{ExperimentConfig, InstanceKind, Policy, ProtocolId};
pub use error::{HarnessError, Result};
pub use experiment::{monte_carlo_error, run_trial, MonteCarloResult, TrialOutcome};
pub use fit::{fit_scaling, Fit, Model, ScalingPoint};
pub use stats::{clopper_pearson, ErrorEstimate};
