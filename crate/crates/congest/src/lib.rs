//! Round-synchronous CONGEST simulation and local triangle enumeration built
//! on two-party set intersection.

pub mod error;
pub mod graph;
pub mod network;
pub mod orientation;
pub mod triangles;

pub use error::{CongestError, Result};
pub use graph::{brute_force_triangles, Graph, Triangle};
pub use network::{message_cap, replay_sessions, CongestNetwork, Envelope, ReplayStats, Session};
pub use orientation::{peel_orientation, Orientation};
pub use triangles::{
    enumerate_triangles, enumerate_triangles_arboricity, enumerate_triangles_oriented, CongestConfig, PhaseStats,
    TriangleRun,
};
