//! Sampling, peak analysis, optimization and cross-validation built on the
//! closed-form dynamics.

mod optimize;
mod peaks;
mod search;
mod sweep;
mod trajectory;
mod verify;

pub use optimize::{optimize_transfer, transfer_objective, OptimizationResult, COARSE_GRID};
pub use peaks::{
    complete_transfer_times, default_sup_horizon, find_peaks, sup_concurrence, PeakRecord,
    DEFAULT_TRANSFER_THRESHOLD, PEAK_FLOOR,
};
pub use search::golden_section_max;
pub use sweep::{sup_sweep, SweepPoint};
pub use trajectory::{sample_trajectory, Trajectory, TrajectoryRow};
pub use verify::{
    compare_cases, invariant_suite, random_case, verify_oracle, CheckOutcome, OracleReport,
    AMPLITUDE_TOL, CONCURRENCE_TOL,
};
