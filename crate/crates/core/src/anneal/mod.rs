//! The replicated simulated-annealing chain.
//!
//! A state is `y` replicas of a configuration in `{-1,+1}^N`. Each step picks
//! one replica and one coordinate uniformly and proposes to flip it; the
//! proposal is accepted with a Metropolis rule for
//! `exp(-β Σ_a E(s^a) + Σ_i log cosh(γ Σ_a s^a_i))`. Two rules are provided
//! (see [`Kernel`]); both are reversible with respect to that measure.

mod chain;
mod kernel;
mod schedule;

pub use chain::{run, run_from, ChainState, RunOptions, RunStats, StepOutcome, TrajectoryPoint};
pub use kernel::{
    combined_acceptance, interaction_delta, log_cosh_stable, two_stage_acceptance, Kernel,
};
pub use schedule::{azencott_lengths, AnnealSchedule, GammaSchedule, Stage};
