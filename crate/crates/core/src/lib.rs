//! Two-party communication protocols for equality testing, existence of an
//! equal coordinate and set intersection, with exact bit and round accounting.

pub mod bits;
pub mod codes;
pub mod coins;
pub mod error;
pub mod instance;
pub mod lemma_lab;
pub mod primitives;
pub mod protocols;
pub mod reductions;
pub mod transcript;

pub use bits::{BitString, Rows};
pub use coins::SharedCoins;
pub use error::{Error, Result};
pub use instance::{make_instance, Instance};
pub use transcript::{CostLedger, Direction, Transcript};
