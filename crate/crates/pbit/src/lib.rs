//! Simulator for networks of binary stochastic neurons ("p-bits") built
//! from low-energy-barrier magnets.
//!
//! The crate models the device compact law (a distorted tanh activation
//! with a stochastic threshold), couples devices through a synapse
//! matrix and bias vector, and runs Gibbs-style chains over two network
//! classes:
//!
//! * symmetric networks for energy-minimization optimization (embedded
//!   logic gates, random Ising couplings), and
//! * directed acyclic networks for probabilistic graphical inference
//!   (family-tree Bayesian networks).
//!
//! Device variability is modeled as per-device characteristic
//! distortions (horizontal/vertical shift and scale) and energy-barrier
//! spread; its computational cost is quantified as a mean absolute
//! error between ideal and afflicted chains, aggregated over seeded
//! replications.
//!
//! Start with the `examples/` directory: each example exercises one
//! capability end to end. The `pbit` binary wraps the same machinery in
//! `run`, `sweep`, `compare-schedules`, `verify`, and `networks`
//! subcommands.

pub mod config;
pub mod device;
pub mod error;
pub mod experiment;
pub mod metrics;
pub mod network;
pub mod sampler;
pub mod variability;
pub mod verify;

pub use config::{ExperimentConfig, NetworkSelector, ScheduleSelector, SweepGrid};
pub use device::{BarrierSpec, DistortionProfile, PBitParams};
pub use experiment::{compare_schedules, run_experiment, ResultRow};
pub use network::{NetworkKind, NetworkSpec};
pub use sampler::{run_chain, ChainAccumulators, ChainConfig, Schedule};
pub use variability::{DeviceEnsemble, DistortionSweep, SweepKind};
