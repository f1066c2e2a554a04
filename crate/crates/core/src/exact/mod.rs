//! Brute-force analysis of the replicated chain on tiny instances.
//!
//! Everything here enumerates the `2^{Ny}` replica ensembles of a
//! [`TableEnergy`](crate::energy::TableEnergy), so sizes are capped
//! (`Ny ≤ 16` for laws, `Ny ≤ 12` for matrices).

mod constants;
mod elevation;
pub mod fixtures;
mod limits;
mod matrix;
mod monte_carlo;
mod schedule_check;
mod tables;

pub use constants::{compute_constants, interaction_gap, linear_fit, smallest_gap, ConvergenceConstants};
pub use elevation::{compute_elevation_m, elevation_of};
pub use limits::{
    classify_minima, dense_region_mass, limit_distribution_check, LimitReport, MinimaReport, MinimumEntry,
    DEFAULT_BETA_LARGE, DEFAULT_GAMMA_LARGE,
};
pub use matrix::{
    build_kernel_matrix, build_kernel_matrix_with, detailed_balance_violation, gap_curve, stationary_and_gap,
    AcceptanceFn, KernelMatrix, Spectrum, MAX_MATRIX_BITS, REVERSIBILITY_TOL,
};
pub use monte_carlo::{empirical_law, total_variation};
pub use schedule_check::{
    heuristic_error_bound, validate_schedule, BoundConstants, ScheduleReport, Verdict, DIVERGENCE_THRESHOLD,
};
pub use tables::{enumerate_qbar, EnsembleSpace, ExactTables, QbarEnumeration, MAX_DIRECT_N, MAX_TABLE_BITS};
