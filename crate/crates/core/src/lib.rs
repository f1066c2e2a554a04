//! Replicated simulated annealing over `{-1, +1}^N`.
//!
//! The crate is organised around the replicated measure
//!
//! ```text
//! Qbar({s^a}) ∝ exp(-β Σ_a E(s^a) + Σ_i log cosh(γ Σ_a s^a_i))
//! ```
//!
//! obtained by summing out the reference configuration of the robust
//! ensemble. [`anneal`] samples it with single-flip Metropolis chains,
//! [`exact`] enumerates it on tiny instances to check stationarity, spectral
//! gaps, limit laws and the preference for dense clusters of minima, and
//! [`experiments`] drives the MNIST and synthetic-pattern runs.
//!
//! ```
//! use replicated_annealing::anneal::{run, AnnealSchedule, Kernel, RunOptions};
//! use replicated_annealing::energy::{generate_synthetic, PerceptronEnergy};
//!
//! let patterns = generate_synthetic(30, 101, 7);
//! let model = PerceptronEnergy::new(patterns).unwrap();
//! let schedule = AnnealSchedule::exponential(0.1, 1000.0, 20_000).unwrap();
//! let opts = RunOptions { replicas: 3, kernel: Kernel::Combined, ..RunOptions::default() };
//! let (state, stats) = run(&model, &schedule, &opts, 42).unwrap();
//! assert!(stats.active_transitions <= 20_000);
//! assert_eq!(state.ensemble().replica_count(), 3);
//! ```

pub mod anneal;
pub mod data;
pub mod energy;
pub mod error;
pub mod exact;
pub mod experiments;
pub mod rng;
pub mod spin;

pub use error::{Error, Result};
pub use spin::{FlipMove, ReplicaEnsemble, SpinVector};
