//! Common-eigenvector test for the relative operators `A_α = U_α† U_α₀`.
//!
//! Each `A_α` is unitary, hence normal, so its eigenspaces are the joint
//! eigenspaces of the commuting Hermitian parts `(A + A†)/2` and
//! `(A − A†)/(2i)`. The search keeps a list of candidate subspaces and
//! intersects each with every eigenspace of the next operator.

use num_complex::Complex64 as C64;

use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, inner, vec_norm, ComplexMatrix};
use crate::states::PureState;
use crate::tolerances;

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremVerdict {
    /// No vector is an eigenvector of every `A_α`.
    pub intersection_empty: bool,
    pub witness: Option<PureState>,
    /// Number of (candidate subspace, eigenspace) intersections computed.
    pub checked_pairs: usize,
}

impl TheoremVerdict {
    pub fn transition_predicted(&self) -> bool {
        self.intersection_empty
    }
}

/// Orthonormal basis stored as columns.
type Subspace = Vec<Vec<C64>>;

fn basis_matrix(basis: &Subspace, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, basis.len(), |i, j| basis[j][i])
}

/// Groups eigenpairs of `Q† H Q` into clusters of nearly equal eigenvalue and
/// lifts each cluster back to the ambient space.
fn split_by(h: &ComplexMatrix, space: &Subspace) -> Result<Vec<Subspace>> {
    let n = h.rows();
    let q = basis_matrix(space, n);
    let restricted = q.adjoint().matmul(&h.matmul(&q));
    let dec = eig_hermitian(&restricted)?;
    let mut groups: Vec<Subspace> = Vec::new();
    let mut last = f64::NEG_INFINITY;
    for (k, &lambda) in dec.eigenvalues.iter().enumerate() {
        let v = q.mul_vec(&dec.vector(k));
        if lambda - last > tolerances::DEGENERACY_GAP || groups.is_empty() {
            groups.push(Vec::new());
        }
        groups.last_mut().unwrap().push(v);
        last = lambda;
    }
    Ok(groups)
}

/// Eigenspaces of a unitary matrix.
pub fn unitary_eigenspaces(a: &ComplexMatrix) -> Result<Vec<Vec<Vec<C64>>>> {
    let n = a.rows();
    let adj = a.adjoint();
    let h1 = (a + &adj).scale_real(0.5);
    let h2 = (a - &adj).scale(C64::new(0.0, -0.5));
    let full: Subspace = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for coarse in split_by(&h1, &full)? {
        out.extend(split_by(&h2, &coarse)?);
    }
    Ok(out)
}

/// Intersection of two subspaces, as the unit-eigenvalue eigenvectors of
/// `Q† Π_P Q`.
pub fn intersect(q: &[Vec<C64>], p: &[Vec<C64>]) -> Result<Vec<Vec<C64>>> {
    if q.is_empty() || p.is_empty() {
        return Ok(Vec::new());
    }
    let n = q[0].len();
    let qm = basis_matrix(&q.to_vec(), n);
    let pm = basis_matrix(&p.to_vec(), n);
    let overlap = qm.adjoint().matmul(&pm);
    let gram = overlap.matmul(&overlap.adjoint());
    let dec = eig_hermitian(&gram)?;
    let mut out = Vec::new();
    for (k, &lambda) in dec.eigenvalues.iter().enumerate() {
        if lambda >= 1.0 - tolerances::DEGENERACY_GAP {
            out.push(qm.mul_vec(&dec.vector(k)));
        }
    }
    Ok(out)
}

/// Largest `‖A w − ⟨w|A w⟩ w‖` over the given operators.
pub fn eigen_residual(ops: &[ComplexMatrix], w: &[C64]) -> f64 {
    let mut worst: f64 = 0.0;
    for a in ops {
        let aw = a.mul_vec(w);
        let lambda = inner(w, &aw);
        let r: Vec<C64> = aw.iter().zip(w).map(|(x, y)| x - lambda * y).collect();
        worst = worst.max(vec_norm(&r));
    }
    worst
}

/// Relative operators `U_α† U_α₀` for every other operator with nonzero weight.
pub fn relative_operators(ch: &KrausChannel, alpha0: usize) -> Result<Vec<ComplexMatrix>> {
    if alpha0 >= ch.len() {
        return Err(Error::InvalidArgument(format!("reference index {alpha0} out of range")));
    }
    if ch.probs()[alpha0] <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "reference operator {alpha0} has zero weight"
        )));
    }
    let u0 = &ch.ops()[alpha0];
    Ok(ch
        .ops()
        .iter()
        .zip(ch.probs())
        .enumerate()
        .filter(|&(i, (_, &p))| i != alpha0 && p > 0.0)
        .map(|(_, (u, _))| u.adjoint().matmul(u0))
        .collect())
}

/// First operator with nonzero weight, the default reference.
pub fn default_reference(ch: &KrausChannel) -> usize {
    ch.probs().iter().position(|&p| p > 0.0).unwrap_or(0)
}

/// Decides whether the relative operators share an eigenvector. When they
/// do not, the minimum output entropy is predicted to switch between
/// entangled and separable inputs somewhere in `0 < μ < 1`.
pub fn check_theorem(ch: &KrausChannel, alpha0: usize) -> Result<TheoremVerdict> {
    let ops = relative_operators(ch, alpha0)?;
    let n = ch.dim();
    let mut candidates: Vec<Subspace> = vec![(0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
                .collect()
        })
        .collect()];
    let mut checked_pairs = 0;

    for a in &ops {
        let spaces = unitary_eigenspaces(a)?;
        let mut next = Vec::new();
        for w in &candidates {
            for e in &spaces {
                checked_pairs += 1;
                let x = intersect(w, e)?;
                if !x.is_empty() {
                    next.push(x);
                }
            }
        }
        candidates = next;
        if candidates.is_empty() {
            break;
        }
    }

    let witness = match candidates.first() {
        None => None,
        Some(space) => {
            let w = space[0].clone();
            let residual = eigen_residual(&ops, &w);
            if residual > tolerances::EIG_RESIDUAL {
                return Err(Error::Residual(residual));
            }
            Some(PureState::new(w)?)
        }
    };
    Ok(TheoremVerdict {
        intersection_empty: witness.is_none(),
        witness,
        checked_pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{pauli_channel, pauli_operator_set, qubit_ixz_channel};
    use crate::linalg::random::random_unitary;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn two_active_operators_always_share_an_eigenvector() {
        let ch = qubit_ixz_channel(0.0, 0.5, 0.5).unwrap();
        let alpha0 = default_reference(&ch);
        assert_eq!(alpha0, 1);
        let v = check_theorem(&ch, alpha0).unwrap();
        assert!(!v.intersection_empty);
        assert!(!v.transition_predicted());
        let rel = relative_operators(&ch, alpha0).unwrap();
        assert_eq!(rel.len(), 1);
        assert!(eigen_residual(&rel, v.witness.unwrap().amplitudes()) <= 1e-9);
    }

    #[test]
    fn identity_and_z_share_basis_states() {
        let ch = qubit_ixz_channel(0.5, 0.0, 0.5).unwrap();
        let v = check_theorem(&ch, 0).unwrap();
        assert!(!v.intersection_empty);
        let w = v.witness.unwrap();
        let a = w.amplitudes();
        assert!(a[0].norm() < 1e-9 || a[1].norm() < 1e-9);
    }

    #[test]
    fn full_qubit_ixz_channel_has_empty_intersection() {
        let ch = qubit_ixz_channel(0.3, 0.2, 0.5).unwrap();
        for alpha0 in 0..3 {
            assert!(check_theorem(&ch, alpha0).unwrap().intersection_empty);
        }
    }

    #[test]
    fn single_operator_is_trivially_nonempty() {
        let v = check_theorem(&KrausChannel::identity(3), 0).unwrap();
        assert!(!v.intersection_empty);
        assert_eq!(v.checked_pairs, 0);
    }

    #[test]
    fn commuting_diagonal_family_has_witness() {
        let d = 3;
        let set = pauli_operator_set(d).unwrap();
        let ops = vec![set.get(0, 0).clone(), set.get(0, 1).clone(), set.get(0, 2).clone()];
        let ch = KrausChannel::new(ops.clone(), vec![0.2, 0.5, 0.3]).unwrap();
        let v = check_theorem(&ch, 2).unwrap();
        let w = v.witness.expect("diagonal family shares eigenvectors");
        let rel = relative_operators(&ch, 2).unwrap();
        assert!(eigen_residual(&rel, w.amplitudes()) <= 1e-9);
    }

    #[test]
    fn random_conjugated_commuting_family_has_witness() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let d = 4;
        let set = pauli_operator_set(d).unwrap();
        let v = random_unitary(d, &mut rng);
        let ops: Vec<ComplexMatrix> = (0..d as i64).map(|n| set.get(0, n).conjugate_by(&v)).collect();
        let ch = KrausChannel::new(ops, vec![0.25; 4]).unwrap();
        let verdict = check_theorem(&ch, 0).unwrap();
        assert!(!verdict.intersection_empty);
        let rel = relative_operators(&ch, 0).unwrap();
        assert!(eigen_residual(&rel, verdict.witness.unwrap().amplitudes()) <= 1e-9);
    }

    #[test]
    fn generic_pauli_channel_has_empty_intersection() {
        for d in [2usize, 3, 5] {
            let probs = vec![1.0 / (d * d) as f64; d * d];
            let ch = pauli_channel(d, &probs).unwrap();
            assert!(check_theorem(&ch, 0).unwrap().intersection_empty, "d = {d}");
        }
    }

    #[test]
    fn zero_weight_reference_rejected() {
        let ch = qubit_ixz_channel(0.0, 0.5, 0.5).unwrap();
        assert!(check_theorem(&ch, 0).is_err());
        assert!(check_theorem(&ch, 7).is_err());
    }

    #[test]
    fn eigenspaces_of_diagonal_unitary_group_degenerate_phases() {
        let i = C64::new(0.0, 1.0);
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        let a = ComplexMatrix::new(3, 3, vec![i, zero, zero, zero, one, zero, zero, zero, i]).unwrap();
        let spaces = unitary_eigenspaces(&a).unwrap();
        let mut dims: Vec<usize> = spaces.iter().map(|s| s.len()).collect();
        dims.sort();
        assert_eq!(dims, vec![1, 2]);
    }
}
