//! Correlated-noise quantum channels in arbitrary finite dimension.
//!
//! The crate builds the two-use channel
//!
//! ```text
//! E(rho) = (1 - mu) (Phi ⊗ Phi*)(rho) + mu Phi_c(rho)
//! ```
//!
//! where `Phi` is a unitary-Kraus channel on one qudit, `Phi*` uses the
//! entrywise conjugated Kraus operators and `Phi_c` applies the same error
//! `U ⊗ U*` to both qudits. On top of that it provides:
//!
//! - minimum-output-entropy search over two-qudit pure states ([`optimize`]),
//! - `mu` sweeps with detection of the separable to maximally entangled jump
//!   ([`analysis::sweep`]),
//! - a checker for the joint-invariant-state criterion that predicts the jump
//!   ([`analysis::theorem`]),
//! - covariance and group-average checks that turn the minimum output entropy
//!   into the achieved two-use mutual information ([`analysis::capacity`]),
//! - closed-form fidelity and linear-entropy estimates for symmetric Pauli
//!   channels ([`analysis::estimates`]),
//! - a small CLI writing CSV and SVG output ([`cli`]).
//!
//! All entropies are in bits.

pub mod analysis;
pub mod channels;
pub mod cli;
pub mod error;
pub mod linalg;
pub mod optimize;
pub mod states;
pub mod tolerances;

pub use channels::{CorrelatedChannel, KrausChannel, PauliOperatorSet};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, DensityMatrix, EigenDecomposition};
pub use num_complex::Complex64 as C64;
pub use optimize::{MinEntropyResult, OptimizerConfig, SearchMode};
pub use states::{ParamVector, PureState, SymmetricAnsatz};
