//! Numerical tolerances shared across the crate.

/// Max-entry deviation from Hermiticity accepted for a density matrix.
pub const HERMITICITY: f64 = 1e-10;

/// Hermiticity accepted on eigensolver input, relative to `max(1, ‖A‖_max)`.
pub const EIG_INPUT_HERMITICITY: f64 = 1e-8;

/// Trace deviation accepted for a density matrix.
pub const TRACE: f64 = 1e-10;

/// Eigenvalues in `[-ENTROPY_CLAMP, 0]` are treated as exact zeros.
pub const ENTROPY_CLAMP: f64 = 1e-10;

/// Eigenpair residual bound, relative to `‖A‖_max`.
pub const EIG_RESIDUAL: f64 = 1e-9;

/// Unitarity of Kraus operators, `‖U†U - I‖_max`.
pub const UNITARITY: f64 = 1e-9;

/// Probability normalization for Kraus channels.
pub const PROBABILITY_SUM: f64 = 1e-10;

/// Norm deviation accepted for state vectors.
pub const STATE_NORM: f64 = 1e-10;

/// Norm deviation accepted for the `psi` argument of a pure-state fidelity.
pub const FIDELITY_NORM: f64 = 1e-8;

/// Eigenvalue gap below which eigenvalues are grouped into one eigenspace.
pub const DEGENERACY_GAP: f64 = 1e-8;

/// Entropies closer than this are indistinguishable: an eigenvalue at the
/// clamp boundary alone contributes about 3.3e-9 bits.
pub const ENTROPY_TIE: f64 = 1e-8;

/// Column symmetry `p[m][n] == p[m][0]` required by the ansatz fast path.
pub const COLUMN_SYMMETRY: f64 = 1e-12;

/// Target bracket width when refining a transition point.
pub const TRANSITION_WIDTH: f64 = 1e-3;
