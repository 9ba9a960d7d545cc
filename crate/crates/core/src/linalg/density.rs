use num_complex::Complex64 as C64;

use super::eig::eigvals_hermitian;
use super::matrix::{vec_norm, ComplexMatrix};
use crate::error::{Error, Result};
use crate::tolerances;

/// Hermitian, unit-trace, positive-semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, trace and positivity.
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "density matrix must be square, got {}x{}",
                mat.rows(),
                mat.cols()
            )));
        }
        let defect = mat.hermiticity_defect();
        if defect > tolerances::HERMITICITY {
            return Err(Error::NotHermitian(defect));
        }
        let tr = mat.trace().re;
        if (tr - 1.0).abs() > tolerances::TRACE {
            return Err(Error::BadTrace(tr));
        }
        let min = eigvals_hermitian(&mat)?[0];
        if min < -tolerances::ENTROPY_CLAMP {
            return Err(Error::NotPositive(min));
        }
        Ok(Self { mat })
    }

    /// `|ψ⟩⟨ψ|` for a unit vector.
    pub fn from_pure(psi: &[C64]) -> Result<Self> {
        let norm = vec_norm(psi);
        if (norm - 1.0).abs() > tolerances::STATE_NORM {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self {
            mat: ComplexMatrix::outer(psi),
        })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            mat: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    /// Wraps the output of a trace-preserving map applied to a valid state.
    pub(crate) fn from_matrix_unchecked(mat: ComplexMatrix) -> Self {
        debug_assert!(mat.is_square());
        Self { mat }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    /// `U ρ U†`.
    pub fn conjugated(&self, u: &ComplexMatrix) -> Self {
        Self {
            mat: self.mat.conjugate_by(u),
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.mat.max_abs_diff(&other.mat)
    }
}

/// Reduced state on subsystem `keep` of a bipartite state with factor
/// dimensions `dims`.
pub fn partial_trace(rho: &DensityMatrix, dims: (usize, usize), keep: usize) -> Result<DensityMatrix> {
    let (da, db) = dims;
    if da == 0 || db == 0 || da * db != rho.dim() {
        return Err(Error::DimensionMismatch(format!(
            "dims product ≠ rho.dim ({da}·{db} vs {})",
            rho.dim()
        )));
    }
    let m = rho.matrix();
    let reduced = match keep {
        0 => ComplexMatrix::from_fn(da, da, |i, j| (0..db).map(|k| m[(i * db + k, j * db + k)]).sum()),
        1 => ComplexMatrix::from_fn(db, db, |k, l| (0..da).map(|i| m[(i * db + k, i * db + l)]).sum()),
        _ => {
            return Err(Error::InvalidArgument(format!(
                "subsystem index {keep} not in {{0, 1}}"
            )))
        }
    };
    Ok(DensityMatrix::from_matrix_unchecked(reduced))
}

/// `-Σ λ log₂ λ` over a spectrum, with the clamp window mapped to zero.
pub fn entropy_from_eigenvalues(eigenvalues: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &lambda in eigenvalues {
        if lambda < -tolerances::ENTROPY_CLAMP {
            return Err(Error::NotPositive(lambda));
        }
        if lambda > 0.0 {
            s -= lambda * lambda.log2();
        }
    }
    Ok(s.max(0.0))
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    entropy_from_eigenvalues(&eigvals_hermitian(rho.matrix())?)
}

/// `1 − tr(ρ²)`.
pub fn linear_entropy(rho: &DensityMatrix) -> f64 {
    // tr(ρ²) = Σ |ρ_ij|² for Hermitian ρ.
    1.0 - rho.matrix().as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>()
}

/// `⟨ψ|ρ|ψ⟩`.
pub fn fidelity_pure(psi: &[C64], rho: &DensityMatrix) -> Result<f64> {
    if psi.len() != rho.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state of length {} vs rho.dim {}",
            psi.len(),
            rho.dim()
        )));
    }
    let norm = vec_norm(psi);
    if (norm - 1.0).abs() > tolerances::FIDELITY_NORM {
        return Err(Error::NotNormalized(norm));
    }
    let rho_psi = rho.matrix().mul_vec(psi);
    Ok(psi.iter().zip(&rho_psi).map(|(a, b)| a.conj() * b).sum::<C64>().re)
}
