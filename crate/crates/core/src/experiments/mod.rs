//! Training runs, grid sweeps, perturbation curves and the exact verification suite.

mod robustness;
mod stats;
mod sweep;
mod train;
mod verify;

pub use robustness::{
    robustness_command, robustness_eval, robustness_on, EvaluationTarget, PerturbationMode, RobustnessCurve,
    RobustnessPoint, RobustnessSpec,
};
pub use stats::{mean_ci, normal_quantile, MeanCi};
pub use sweep::{run_sweep, summarize, sweep_beta, sweep_gamma, with_jobs, PointSummary, SweepGrid, SweepResult, SweepSpec};
pub use train::{
    check_scale, run_point, train_command, train_on, PointParams, RunLabel, Task, TrainOutcome, DESK_SCALE_ITERATIONS,
};
pub use verify::{
    balance_suite, dense_suite, enumeration_suite, exact_verify_command, gap_suite, limit_suite, monte_carlo_suite,
    mutation_suite, schedule_suite, Check, VerifyOptions, VerifyReport, GAP_BRACKET_LIMIT,
};
