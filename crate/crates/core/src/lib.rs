//! Simulation of round-compressed parallel peeling for approximate minimum
//! vertex cover in the MPC model, with the auditors that check its analysis.
//!
//! * [`graph`], [`generate`]: the immutable graph substrate and random inputs.
//! * [`schedule`], [`peeling`]: threshold schedules, sequential peeling, and
//!   the per-machine Local-Peeling routine.
//! * [`mpc`]: the Parallel-Peeling orchestrator with round and memory accounting.
//! * [`oracle`]: exact covers, matchings, the hypothetical process, and the sandwich audit.
//! * [`random`]: balls into bins, induced matchings, and concentration checks.

pub mod cover;
pub mod error;
pub mod generate;
pub mod graph;
pub mod mpc;
pub mod oracle;
pub mod peeling;
pub mod random;
pub mod rng;
pub mod schedule;
mod vertex_set;

pub use cover::{CoverResult, Provenance};
pub use error::{Error, Result};
pub use generate::{gen_bipartite_gnp, gen_gnp};
pub use graph::Graph;
pub use mpc::{parallel_peel, FinalPhaseMode, MpcConfig, MpcTrace};
pub use peeling::{local_peel, sequential_peel, PeelTrace};
pub use rng::RngSeed;
pub use schedule::{make_schedule, PhaseSchedule};
pub use vertex_set::VertexSet;
