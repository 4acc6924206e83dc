//! Reductions between set intersection and equality testing, and universe
//! reduction.

pub mod perfect_hash;
pub mod primes;
pub mod setint;
pub mod universe;

pub use perfect_hash::PerfectHash;
pub use setint::{eq_via_setint, setint_via_eq, SetIntRun};
pub use universe::{reduce_to_range, reduce_universe, ReducedSets};
