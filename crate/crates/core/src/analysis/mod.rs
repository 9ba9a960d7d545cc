//! Parameter sweeps, transition detection and the analytic side checks.

pub mod capacity;
pub mod estimates;
pub mod sweep;
pub mod theorem;

pub use capacity::{
    capacity_report, ensemble_holevo, mutual_information_i2, verify_covariance, verify_schur_average, CapacityReport,
};
pub use estimates::{analytic_estimates, c_matrix, estimate_mu_c_crossing, AnalyticEstimates};
pub use sweep::{detect_transition, sweep, transition_bracket, uniform_grid, SweepEntry, SweepResult};
pub use theorem::{check_theorem, default_reference, relative_operators, TheoremVerdict};
