//! Two-qudit pure states: product and maximally entangled inputs, the
//! diagonal ansatz `Σ_j a_j |j, j−k⟩`, a real parameterization for the
//! optimizers and entropy of entanglement.

use num_complex::Complex64 as C64;

use crate::channels::apply_local_pair;
use crate::error::{Error, Result};
use crate::linalg::{eigvals_hermitian, entropy_from_eigenvalues, vec_norm, ComplexMatrix, DensityMatrix};
use crate::tolerances;

/// Unit vector of amplitudes; for two qudits the index of `|i, j⟩` is `i·d + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amps: Vec<C64>,
}

impl PureState {
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        let norm = vec_norm(&amps);
        if (norm - 1.0).abs() > tolerances::STATE_NORM {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { amps })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(&self.amps).expect("normalized by construction")
    }

    /// `|⟨self|other⟩|`.
    pub fn overlap(&self, other: &Self) -> f64 {
        crate::linalg::inner(&self.amps, &other.amps).norm()
    }
}

/// Interleaved `(re, im)` coordinates of an unnormalized amplitude vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamVector {
    pub coords: Vec<f64>,
}

impl ParamVector {
    pub fn new(coords: Vec<f64>) -> Self {
        Self { coords }
    }
}

/// `Σ_j a_j |j, (j − k) mod d⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricAnsatz {
    d: usize,
    k: usize,
    a: Vec<C64>,
}

impl SymmetricAnsatz {
    pub fn new(d: usize, k: usize, a: Vec<C64>) -> Result<Self> {
        if a.len() != d {
            return Err(Error::DimensionMismatch(format!(
                "{} ansatz coefficients for d = {d}",
                a.len()
            )));
        }
        if k >= d {
            return Err(Error::InvalidArgument(format!(
                "ansatz offset k = {k} not below d = {d}"
            )));
        }
        let norm = vec_norm(&a);
        if (norm - 1.0).abs() > tolerances::STATE_NORM {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { d, k, a })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn coefficients(&self) -> &[C64] {
        &self.a
    }
}

/// `(1/√d) Σ_i |i, i⟩`.
pub fn max_entangled(d: usize) -> PureState {
    let amp = C64::new(1.0 / (d as f64).sqrt(), 0.0);
    let mut amps = vec![C64::new(0.0, 0.0); d * d];
    for i in 0..d {
        amps[i * d + i] = amp;
    }
    PureState { amps }
}

/// Computational product state `|i, j⟩`.
pub fn basis_separable(d: usize, i: usize, j: usize) -> Result<PureState> {
    if i >= d || j >= d {
        return Err(Error::InvalidArgument(format!(
            "basis index ({i}, {j}) out of range for d = {d}"
        )));
    }
    let mut amps = vec![C64::new(0.0, 0.0); d * d];
    amps[i * d + j] = C64::new(1.0, 0.0);
    Ok(PureState { amps })
}

/// Normalizes a vector and rotates its global phase so the largest-modulus
/// amplitude (first one on ties) is real and nonnegative.
pub(crate) fn gauge_fixed(mut amps: Vec<C64>) -> Result<Vec<C64>> {
    let norm = vec_norm(&amps);
    if !norm.is_finite() || norm < 1e-12 {
        return Err(Error::InvalidArgument("parameter vector is zero".into()));
    }
    let mut lead = 0;
    let mut best = -1.0;
    for (i, z) in amps.iter().enumerate() {
        let m = z.norm_sqr();
        if m > best {
            best = m;
            lead = i;
        }
    }
    let rot = amps[lead].conj() / amps[lead].norm() / norm;
    for z in amps.iter_mut() {
        *z *= rot;
    }
    amps[lead] = C64::new(amps[lead].re, 0.0);
    Ok(amps)
}

/// Maps optimizer coordinates to a normalized, gauge-fixed pure state.
pub fn from_params(p: &ParamVector, dim: usize) -> Result<PureState> {
    if p.coords.len() != 2 * dim {
        return Err(Error::DimensionMismatch(format!(
            "{} coordinates for dimension {dim}",
            p.coords.len()
        )));
    }
    let amps = p.coords.chunks_exact(2).map(|c| C64::new(c[0], c[1])).collect();
    Ok(PureState {
        amps: gauge_fixed(amps)?,
    })
}

/// Inverse of [`from_params`] up to scale and global phase.
pub fn params_of(psi: &PureState) -> ParamVector {
    ParamVector::new(psi.amps.iter().flat_map(|z| [z.re, z.im]).collect())
}

pub fn ansatz_state(a: &SymmetricAnsatz) -> PureState {
    let d = a.d;
    let mut amps = vec![C64::new(0.0, 0.0); d * d];
    for (j, &aj) in a.a.iter().enumerate() {
        amps[j * d + (j + d - a.k) % d] = aj;
    }
    PureState { amps }
}

/// Reduced state `Tr_B |ψ⟩⟨ψ|` of a two-qudit pure state: `Ψ Ψ†` for the
/// `d × d` amplitude matrix.
fn reduced_first(psi: &[C64], d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, d, |i, j| {
        (0..d).map(|k| psi[i * d + k] * psi[j * d + k].conj()).sum()
    })
}

/// Entropy of entanglement in bits.
pub fn entanglement_of(psi: &PureState, d: usize) -> Result<f64> {
    if psi.dim() != d * d {
        return Err(Error::DimensionMismatch(format!(
            "state of dimension {} is not two qudits of d = {d}",
            psi.dim()
        )));
    }
    entropy_from_eigenvalues(&eigvals_hermitian(&reduced_first(&psi.amps, d))?)
}

/// `‖(U ⊗ U*) ψ_ME − ψ_ME‖₂`.
pub fn invariance_check_me(d: usize, u: &ComplexMatrix) -> Result<f64> {
    if u.rows() != d || u.cols() != d {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} operator for d = {d}",
            u.rows(),
            u.cols()
        )));
    }
    let defect = u.unitarity_defect();
    if defect > tolerances::UNITARITY {
        return Err(Error::NotUnitary(defect));
    }
    let me = max_entangled(d);
    let mut image = vec![C64::new(0.0, 0.0); d * d];
    apply_local_pair(u, &u.conj(), me.amplitudes(), d, &mut image);
    Ok(image
        .iter()
        .zip(me.amplitudes())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::pauli_operator_set;
    use crate::linalg::random::{random_state_vector, random_unitary};
    use crate::linalg::{partial_trace, von_neumann_entropy};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn max_entangled_amplitudes() {
        let h = 1.0 / 2f64.sqrt();
        assert_eq!(max_entangled(2).amplitudes(), &[c(h), c(0.0), c(0.0), c(h)]);
        let s = 1.0 / 3f64.sqrt();
        let me3 = max_entangled(3);
        for (i, z) in me3.amplitudes().iter().enumerate() {
            let expected = if i % 4 == 0 { s } else { 0.0 };
            assert_eq!(*z, c(expected));
        }
        assert!((entanglement_of(&me3, 3).unwrap() - 3f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn basis_states() {
        assert_eq!(basis_separable(2, 0, 0).unwrap().amplitudes()[0], c(1.0));
        let s = basis_separable(3, 1, 2).unwrap();
        assert_eq!(s.amplitudes()[5], c(1.0));
        assert_eq!(entanglement_of(&s, 3).unwrap(), 0.0);
        assert!(basis_separable(3, 3, 0).is_err());
    }

    #[test]
    fn params_examples() {
        let mut coords = vec![0.0; 8];
        coords[0] = 1.0;
        assert_eq!(
            from_params(&ParamVector::new(coords.clone()), 4).unwrap(),
            basis_separable(2, 0, 0).unwrap()
        );
        coords[6] = 1.0;
        let bell = from_params(&ParamVector::new(coords), 4).unwrap();
        assert!(bell.overlap(&max_entangled(2)) > 1.0 - 1e-15);
        assert!(from_params(&ParamVector::new(vec![0.0; 8]), 4).is_err());
        assert!(matches!(
            from_params(&ParamVector::new(vec![1.0; 6]), 4),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn gauge_makes_largest_amplitude_real() {
        let p = ParamVector::new(vec![0.1, 0.2, -0.3, 0.9, 0.0, 0.05, 0.2, -0.1]);
        let psi = from_params(&p, 4).unwrap();
        let lead = psi.amplitudes()[1];
        assert!(lead.im == 0.0 && lead.re > 0.0);
    }

    #[test]
    fn ansatz_examples() {
        let s = 1.0 / 3f64.sqrt();
        let uniform = SymmetricAnsatz::new(3, 0, vec![c(s); 3]).unwrap();
        assert!(ansatz_state(&uniform).overlap(&max_entangled(3)) > 1.0 - 1e-15);
        let e0 = SymmetricAnsatz::new(3, 0, vec![c(1.0), c(0.0), c(0.0)]).unwrap();
        assert_eq!(ansatz_state(&e0), basis_separable(3, 0, 0).unwrap());
        // j = 0 → |0, 2⟩ (index 2), j = 1 → |1, 0⟩ (index 3).
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let shifted = ansatz_state(&SymmetricAnsatz::new(3, 1, vec![c(h), c(h), c(0.0)]).unwrap());
        let mut expected = vec![c(0.0); 9];
        expected[2] = c(h);
        expected[3] = c(h);
        assert_eq!(shifted.amplitudes(), expected.as_slice());
        assert!(SymmetricAnsatz::new(3, 3, vec![c(1.0), c(0.0), c(0.0)]).is_err());
        assert!(SymmetricAnsatz::new(3, 0, vec![c(1.0), c(1.0), c(0.0)]).is_err());
    }

    #[test]
    fn entanglement_examples() {
        assert!((entanglement_of(&max_entangled(2), 2).unwrap() - 1.0).abs() < 1e-12);
        let a = SymmetricAnsatz::new(2, 0, vec![c(0.8f64.sqrt()), c(0.2f64.sqrt())]).unwrap();
        let h = -0.8 * 0.8f64.log2() - 0.2 * 0.2f64.log2();
        assert!((entanglement_of(&ansatz_state(&a), 2).unwrap() - h).abs() < 1e-12);
        assert!((h - 0.7219).abs() < 1e-4);
        assert!(entanglement_of(&max_entangled(2), 3).is_err());
    }

    #[test]
    fn entanglement_matches_partial_trace_route() {
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        for d in 2..5 {
            let psi = PureState::new(random_state_vector(d * d, &mut rng)).unwrap();
            let via_trace = von_neumann_entropy(&partial_trace(&psi.to_density(), (d, d), 1).unwrap()).unwrap();
            assert!((entanglement_of(&psi, d).unwrap() - via_trace).abs() < 1e-9);
        }
    }

    #[test]
    fn local_unitaries_preserve_entanglement() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for d in 2..5 {
            for _ in 0..10 {
                let psi = PureState::new(random_state_vector(d * d, &mut rng)).unwrap();
                let u = random_unitary(d, &mut rng);
                let v = random_unitary(d, &mut rng);
                let moved = PureState::new(u.tensor(&v).mul_vec(psi.amplitudes())).unwrap();
                assert!((entanglement_of(&psi, d).unwrap() - entanglement_of(&moved, d).unwrap()).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn invariance_examples() {
        assert_eq!(invariance_check_me(2, &ComplexMatrix::identity(2)).unwrap(), 0.0);
        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert!(invariance_check_me(2, &x).unwrap() <= 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            assert!(invariance_check_me(3, &random_unitary(3, &mut rng)).unwrap() <= 1e-12);
        }
        assert!(matches!(
            invariance_check_me(2, &ComplexMatrix::diag_real(&[1.0, 2.0])),
            Err(Error::NotUnitary(_))
        ));
    }

    #[test]
    fn ansatz_states_are_symmetry_eigenstates() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for d in 2..5 {
            let set = pauli_operator_set(d).unwrap();
            let z = set.get(0, 1);
            let zz = z.tensor(&z.conj());
            for k in 0..d {
                let a = SymmetricAnsatz::new(d, k, random_state_vector(d, &mut rng)).unwrap();
                let psi = ansatz_state(&a);
                let image = zz.mul_vec(psi.amplitudes());
                let phase = crate::linalg::inner(psi.amplitudes(), &image);
                let resid: f64 = image
                    .iter()
                    .zip(psi.amplitudes())
                    .map(|(x, y)| (x - phase * y).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                assert!(resid <= 1e-10);
            }
        }
    }

    proptest! {
        #[test]
        fn params_round_trip(coords in prop::collection::vec(-1.0f64..1.0, 18)) {
            prop_assume!(coords.iter().map(|x| x * x).sum::<f64>() > 1e-6);
            let psi = from_params(&ParamVector::new(coords), 9).unwrap();
            let back = from_params(&params_of(&psi), 9).unwrap();
            prop_assert!((psi.overlap(&back) - 1.0).abs() < 1e-10);
        }

        #[test]
        fn params_are_scale_invariant(coords in prop::collection::vec(-1.0f64..1.0, 8), k in -20i32..20, c in 0.01f64..100.0) {
            prop_assume!(coords.iter().map(|x| x * x).sum::<f64>() > 1e-6);
            let base = from_params(&ParamVector::new(coords.clone()), 4).unwrap();
            let pow2 = 2f64.powi(k);
            let exact = from_params(&ParamVector::new(coords.iter().map(|x| x * pow2).collect()), 4).unwrap();
            prop_assert_eq!(&exact, &base);
            let scaled = from_params(&ParamVector::new(coords.iter().map(|x| x * c).collect()), 4).unwrap();
            for (a, b) in scaled.amplitudes().iter().zip(base.amplitudes()) {
                prop_assert!((a - b).norm() < 1e-14);
            }
        }
    }
}
