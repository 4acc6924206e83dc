//! Equality-testing and ExistsEqual protocols.

pub mod adaptive;
pub mod budget;
pub mod dimreduce;
pub mod engine;
pub mod exists;
pub mod fault;
pub mod pipeline;
pub mod rewind;
pub mod schedule;
pub mod simple;

pub use budget::error_budget_threshold;
pub use engine::{Link, PhaseRecord};
pub use exists::{Answer, ExistsRun};
pub use fault::{Fault, FaultPlan, Stage, Target};
pub use pipeline::{
    adaptive_equality_testing, exists_equal, rewind_equality_testing, simple_equality_testing,
};
pub use rewind::{RewindOutcome, RewindRun};
pub use schedule::{DomainPolicy, PhaseSchedule};
pub use simple::EtRun;
