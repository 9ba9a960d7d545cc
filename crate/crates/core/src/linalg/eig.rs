//! Cyclic Jacobi eigensolver for small dense complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary, then applies the real symmetric Jacobi rotation that zeroes it.
//! Sweeps run over all `p < q` pairs until the off-diagonal Frobenius mass
//! drops below machine precision relative to the whole matrix.

use num_complex::Complex64 as C64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::tolerances;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order and the matching unit-norm eigenvectors
/// stored as the columns of `eigenvectors`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn vector(&self, i: usize) -> Vec<C64> {
        self.eigenvectors.column(i)
    }

    /// `V·diag(λ)·V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.rows();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n).map(|k| v[(i, k)] * self.eigenvalues[k] * v[(j, k)].conj()).sum()
        })
    }
}

fn check_hermitian(a: &ComplexMatrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigensolver needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let defect = a.hermiticity_defect();
    if defect > tolerances::EIG_INPUT_HERMITICITY * a.max_abs().max(1.0) {
        return Err(Error::NotHermitian(defect));
    }
    Ok(())
}

/// Full eigendecomposition of a Hermitian matrix.
pub fn eig_hermitian(a: &ComplexMatrix) -> Result<EigenDecomposition> {
    check_hermitian(a)?;
    let n = a.rows();
    let mut work = a.clone();
    let mut vecs = ComplexMatrix::identity(n);
    jacobi(&mut work, Some(&mut vecs));

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| work[(i, i)].re.total_cmp(&work[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| work[(i, i)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |r, c| vecs[(r, order[c])]);
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Eigenvalues only, ascending. Skips eigenvector accumulation.
pub fn eigvals_hermitian(a: &ComplexMatrix) -> Result<Vec<f64>> {
    check_hermitian(a)?;
    let mut work = a.clone();
    jacobi(&mut work, None);
    let mut vals: Vec<f64> = (0..a.rows()).map(|i| work[(i, i)].re).collect();
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

fn jacobi(a: &mut ComplexMatrix, mut vecs: Option<&mut ComplexMatrix>) {
    let n = a.rows();
    // Symmetrize so that rounding in the input cannot break the iteration.
    for i in 0..n {
        a[(i, i)] = C64::new(a[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let avg = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
    }
    if n < 2 {
        return;
    }
    let total = a.frobenius_norm();
    if total == 0.0 {
        return;
    }
    let target = f64::EPSILON * total;

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(a, vecs.as_deref_mut(), p, q);
            }
        }
    }
}

fn rotate(a: &mut ComplexMatrix, vecs: Option<&mut ComplexMatrix>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Negligible pivot relative to both diagonal entries: just drop it.
    if r < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        a[(p, q)] = C64::new(0.0, 0.0);
        a[(q, p)] = C64::new(0.0, 0.0);
        return;
    }
    let phase = apq / r;
    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // G = diag(1, conj(phase)) · [[c, s], [-s, c]] restricted to (p, q).
    let g_pp = C64::new(c, 0.0);
    let g_pq = C64::new(s, 0.0);
    let g_qp = -phase.conj() * s;
    let g_qq = phase.conj() * c;

    let n = a.rows();
    // A ← A G
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    // A ← G† A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

    if let Some(v) = vecs {
        for k in 0..n {
            let vkp = v[(k, p)];
            let vkq = v[(k, q)];
            v[(k, p)] = vkp * g_pp + vkq * g_qp;
            v[(k, q)] = vkp * g_pq + vkq * g_qq;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::random_hermitian;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn assert_pairs(a: &ComplexMatrix, e: &EigenDecomposition) {
        let scale = a.max_abs().max(f64::MIN_POSITIVE);
        for (i, &lambda) in e.eigenvalues.iter().enumerate() {
            let v = e.vector(i);
            let av = a.mul_vec(&v);
            let resid: f64 = av
                .iter()
                .zip(&v)
                .map(|(x, y)| (x - y * lambda).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(resid <= tolerances::EIG_RESIDUAL * scale, "residual {resid}");
        }
        let v = &e.eigenvectors;
        assert!(v.unitarity_defect() < 1e-9);
        assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn diagonal_input() {
        let a = ComplexMatrix::diag_real(&[3.0, 1.0, 2.0]);
        let e = eig_hermitian(&a).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 2.0, 3.0]);
        assert_pairs(&a, &e);
    }

    #[test]
    fn pauli_x_spectrum() {
        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let e = eig_hermitian(&x).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-15 && (e.eigenvalues[1] - 1.0).abs() < 1e-15);
        assert_pairs(&x, &e);
    }

    #[test]
    fn pauli_y_spectrum_needs_complex_rotation() {
        let y = ComplexMatrix::new(
            2,
            2,
            vec![
                C64::new(0.0, 0.0),
                C64::new(0.0, -1.0),
                C64::new(0.0, 1.0),
                C64::new(0.0, 0.0),
            ],
        )
        .unwrap();
        let e = eig_hermitian(&y).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert_pairs(&y, &e);
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(eig_hermitian(&a), Err(Error::NotHermitian(_))));
        assert!(matches!(eigvals_hermitian(&a), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn random_nine_by_nine_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let h = random_hermitian(9, &mut rng);
        let e = eig_hermitian(&h).unwrap();
        assert!(e.reconstruct().max_abs_diff(&h) <= 1e-9 * h.max_abs());
        assert_pairs(&h, &e);
        let vals = eigvals_hermitian(&h).unwrap();
        for (x, y) in vals.iter().zip(&e.eigenvalues) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_spectrum_keeps_orthonormal_vectors() {
        // U diag(1,1,1,2) U† for a non-trivial unitary.
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let u = crate::linalg::random::random_unitary(4, &mut rng);
        let a = ComplexMatrix::diag_real(&[1.0, 1.0, 1.0, 2.0]).conjugate_by(&u);
        let e = eig_hermitian(&a).unwrap();
        assert_pairs(&a, &e);
        assert!((e.eigenvalues[2] - 1.0).abs() < 1e-12 && (e.eigenvalues[3] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn reconstruction_on_many_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for trial in 0..1000 {
            let n = 1 + trial % 16;
            let h = random_hermitian(n, &mut rng);
            let e = eig_hermitian(&h).unwrap();
            let err = e.reconstruct().max_abs_diff(&h);
            assert!(err <= tolerances::EIG_RESIDUAL * h.max_abs(), "n={n} err={err}");
        }
    }
}
