//! Dense complex linear algebra and the state functionals built on it.

mod density;
mod eig;
mod matrix;
pub mod random;

pub use density::{
    entropy_from_eigenvalues, fidelity_pure, linear_entropy, partial_trace, von_neumann_entropy, DensityMatrix,
};
pub use eig::{eig_hermitian, eigvals_hermitian, EigenDecomposition};
pub use matrix::{inner, tensor_vec, vec_norm, ComplexMatrix};

/// Kronecker product of two matrices.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.tensor(b)
}
