//! Unitary-Kraus channels on one qudit and the correlated two-qudit channel
//! built from them.
//!
//! For a single-qudit channel `Φ(ρ) = Σ p_α U_α ρ U_α†` the two-use channel is
//!
//! ```text
//! E(ρ) = (1 − μ)(Φ ⊗ Φ*)(ρ) + μ Φ_c(ρ),    Φ_c(ρ) = Σ p_α (U_α ⊗ U_α*) ρ (U_α ⊗ U_α*)†
//! ```
//!
//! `E` is a formal two-qudit map: the second factor sees the conjugated
//! channel `Φ*`, so it does not describe two consecutive uses of `Φ`.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityMatrix};
use crate::tolerances;

/// Probability-weighted set of unitary Kraus operators on a `dim`-level system.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    dim: usize,
    ops: Vec<ComplexMatrix>,
    conj_ops: Vec<ComplexMatrix>,
    probs: Vec<f64>,
    /// `p[m][n]` (row-major, `dim × dim`) when built from the Pauli basis.
    pauli_probs: Option<Vec<f64>>,
}

fn validate_probs(probs: &[f64]) -> Result<()> {
    if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
        return Err(Error::BadProbabilities(
            "probabilities must be finite and nonnegative".into(),
        ));
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > tolerances::PROBABILITY_SUM {
        return Err(Error::BadProbabilities(format!(
            "probabilities sum to {sum}, expected 1"
        )));
    }
    Ok(())
}

impl KrausChannel {
    pub fn new(ops: Vec<ComplexMatrix>, probs: Vec<f64>) -> Result<Self> {
        if ops.is_empty() {
            return Err(Error::InvalidArgument(
                "a channel needs at least one Kraus operator".into(),
            ));
        }
        if ops.len() != probs.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} operators vs {} probabilities",
                ops.len(),
                probs.len()
            )));
        }
        let dim = ops[0].rows();
        for op in &ops {
            if op.rows() != dim || op.cols() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "Kraus operator is {}x{}, expected {dim}x{dim}",
                    op.rows(),
                    op.cols()
                )));
            }
            let defect = op.unitarity_defect();
            if defect > tolerances::UNITARITY {
                return Err(Error::NotUnitary(defect));
            }
        }
        validate_probs(&probs)?;
        let conj_ops = ops.iter().map(ComplexMatrix::conj).collect();
        Ok(Self {
            dim,
            ops,
            conj_ops,
            probs,
            pauli_probs: None,
        })
    }

    /// Identity channel on `dim` levels.
    pub fn identity(dim: usize) -> Self {
        Self::new(vec![ComplexMatrix::identity(dim)], vec![1.0]).expect("identity is unitary")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    pub fn conj_ops(&self) -> &[ComplexMatrix] {
        &self.conj_ops
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Row-major `p[m][n]` when the channel was built over the Pauli basis.
    pub fn pauli_probs(&self) -> Option<&[f64]> {
        self.pauli_probs.as_deref()
    }

    /// Column vector `p_m` of a Pauli channel with `p[m][n] = p_m`.
    pub fn column_probs(&self) -> Result<Vec<f64>> {
        let p = self
            .pauli_probs
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("channel was not built over the Pauli basis".into()))?;
        let d = self.dim;
        let mut worst = 0.0f64;
        for m in 0..d {
            for n in 1..d {
                worst = worst.max((p[m * d + n] - p[m * d]).abs());
            }
        }
        if worst > tolerances::COLUMN_SYMMETRY {
            return Err(Error::NotColumnSymmetric(worst));
        }
        Ok((0..d).map(|m| p[m * d]).collect())
    }

    /// Φ(ρ) = Σ p_α U_α ρ U_α†.
    pub fn apply_phi(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.check_dim(rho, self.dim)?;
        Ok(DensityMatrix::from_matrix_unchecked(mix(
            &self.ops,
            &self.probs,
            rho.matrix(),
        )))
    }

    /// Φ*(ρ) = Σ p_α U_α* ρ (U_α*)†.
    pub fn apply_phi_star(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.check_dim(rho, self.dim)?;
        Ok(DensityMatrix::from_matrix_unchecked(mix(
            &self.conj_ops,
            &self.probs,
            rho.matrix(),
        )))
    }

    /// Φ_c(ρ) = Σ p_α (U_α ⊗ U_α*) ρ (U_α ⊗ U_α*)† on two qudits.
    pub fn apply_phi_c(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.check_dim(rho, self.dim * self.dim)?;
        Ok(DensityMatrix::from_matrix_unchecked(self.phi_c_matrix(rho.matrix())))
    }

    /// (Φ ⊗ Φ*)(ρ), applied factor by factor.
    pub fn apply_product(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.check_dim(rho, self.dim * self.dim)?;
        Ok(DensityMatrix::from_matrix_unchecked(self.product_matrix(rho.matrix())))
    }

    fn check_dim(&self, rho: &DensityMatrix, expected: usize) -> Result<()> {
        if rho.dim() != expected {
            return Err(Error::DimensionMismatch(format!(
                "state of dimension {} for a channel expecting {expected}",
                rho.dim()
            )));
        }
        Ok(())
    }

    fn phi_c_matrix(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let pairs: Vec<ComplexMatrix> = self
            .ops
            .iter()
            .zip(&self.conj_ops)
            .map(|(u, uc)| u.tensor(uc))
            .collect();
        mix(&pairs, &self.probs, rho)
    }

    fn product_matrix(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let id = ComplexMatrix::identity(self.dim);
        let left: Vec<ComplexMatrix> = self.ops.iter().map(|u| u.tensor(&id)).collect();
        let right: Vec<ComplexMatrix> = self.conj_ops.iter().map(|uc| id.tensor(uc)).collect();
        mix(&right, &self.probs, &mix(&left, &self.probs, rho))
    }
}

fn mix(ops: &[ComplexMatrix], probs: &[f64], rho: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(rho.rows(), rho.cols());
    for (u, &p) in ops.iter().zip(probs) {
        if p == 0.0 {
            continue;
        }
        out.add_scaled(&rho.conjugate_by(u), p);
    }
    out
}

/// A Kraus channel together with the correlation weight `mu ∈ [0, 1]`.
#[derive(Debug, Clone)]
pub struct CorrelatedChannel {
    base: KrausChannel,
    mu: f64,
}

impl CorrelatedChannel {
    pub fn new(base: KrausChannel, mu: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&mu) {
            return Err(Error::InvalidArgument(format!("mu = {mu} outside [0, 1]")));
        }
        Ok(Self { base, mu })
    }

    pub fn base(&self) -> &KrausChannel {
        &self.base
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Single-qudit dimension `d`; the channel acts on `d²` levels.
    pub fn dim(&self) -> usize {
        self.base.dim
    }

    pub fn with_mu(&self, mu: f64) -> Result<Self> {
        Self::new(self.base.clone(), mu)
    }

    /// E(ρ) = (1 − μ)(Φ ⊗ Φ*)(ρ) + μ Φ_c(ρ).
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let d = self.base.dim;
        self.base.check_dim(rho, d * d)?;
        let mut out = ComplexMatrix::zeros(d * d, d * d);
        if self.mu < 1.0 {
            out.add_scaled(&self.base.product_matrix(rho.matrix()), 1.0 - self.mu);
        }
        if self.mu > 0.0 {
            out.add_scaled(&self.base.phi_c_matrix(rho.matrix()), self.mu);
        }
        Ok(DensityMatrix::from_matrix_unchecked(out))
    }

    /// E(|ψ⟩⟨ψ|) assembled from the images `(U_α ⊗ U_β*)ψ` of a pure input.
    pub fn apply_pure(&self, psi: &[C64]) -> Result<ComplexMatrix> {
        let d = self.base.dim;
        if psi.len() != d * d {
            return Err(Error::DimensionMismatch(format!(
                "state of length {} for a channel expecting {}",
                psi.len(),
                d * d
            )));
        }
        let n = d * d;
        let mut out = ComplexMatrix::zeros(n, n);
        let ops = &self.base.ops;
        let conj = &self.base.conj_ops;
        let probs = &self.base.probs;
        let mut image = vec![C64::new(0.0, 0.0); n];
        for (a, (u, &pa)) in ops.iter().zip(probs).enumerate() {
            if pa == 0.0 {
                continue;
            }
            for (b, (vc, &pb)) in conj.iter().zip(probs).enumerate() {
                if pb == 0.0 {
                    continue;
                }
                let mut w = (1.0 - self.mu) * pa * pb;
                if a == b {
                    w += self.mu * pa;
                }
                if w == 0.0 {
                    continue;
                }
                apply_local_pair(u, vc, psi, d, &mut image);
                out.add_outer(&image, w);
            }
        }
        Ok(out)
    }
}

/// `out = (U ⊗ V) ψ` for `ψ ∈ C^d ⊗ C^d`: reshaped, `U Ψ Vᵀ`.
pub(crate) fn apply_local_pair(u: &ComplexMatrix, v: &ComplexMatrix, psi: &[C64], d: usize, out: &mut [C64]) {
    // tmp = Ψ Vᵀ, tmp[i][l] = Σ_k Ψ[i][k] V[l][k]
    let mut tmp = vec![C64::new(0.0, 0.0); d * d];
    for i in 0..d {
        for l in 0..d {
            tmp[i * d + l] = (0..d).map(|k| psi[i * d + k] * v[(l, k)]).sum();
        }
    }
    for j in 0..d {
        for l in 0..d {
            out[j * d + l] = (0..d).map(|i| u[(j, i)] * tmp[i * d + l]).sum();
        }
    }
}

/// Generalized Pauli (Weyl) operators `U_{mn}|k⟩ = ξ^{kn}|k+m mod d⟩`,
/// `ξ = e^{2πi/d}`, stored in row-major `(m, n)` order.
#[derive(Debug, Clone)]
pub struct PauliOperatorSet {
    dim: usize,
    xi: C64,
    ops: Vec<ComplexMatrix>,
}

impl PauliOperatorSet {
    pub fn new(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidArgument(format!("Pauli operators need d ≥ 2, got {d}")));
        }
        let xi = C64::from_polar(1.0, 2.0 * PI / d as f64);
        let mut ops = Vec::with_capacity(d * d);
        for m in 0..d {
            for n in 0..d {
                let mut u = ComplexMatrix::zeros(d, d);
                for k in 0..d {
                    u[((k + m) % d, k)] = root_power(d, k * n);
                }
                ops.push(u);
            }
        }
        Ok(Self { dim: d, xi, ops })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn xi(&self) -> C64 {
        self.xi
    }

    /// `ξ^k` computed from the reduced exponent `k mod d`.
    pub fn xi_pow(&self, k: i64) -> C64 {
        root_power(self.dim, k.rem_euclid(self.dim as i64) as usize)
    }

    /// `U_{mn}` with indices taken mod `d`.
    pub fn get(&self, m: i64, n: i64) -> &ComplexMatrix {
        let d = self.dim as i64;
        &self.ops[(m.rem_euclid(d) * d + n.rem_euclid(d)) as usize]
    }

    /// All `d²` operators in row-major `(m, n)` order.
    pub fn ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    /// Largest deviations, over all index pairs, from
    /// `U†_{mn} = ξ^{mn} U_{−m,−n}`, `U_{kl} U_{mn} = ξ^{lm−kn} U_{mn} U_{kl}`
    /// and `tr U_{mn} = d δ_{m0} δ_{n0}`.
    pub fn identity_residuals(&self) -> PauliResiduals {
        let d = self.dim as i64;
        let mut r = PauliResiduals::default();
        for m in 0..d {
            for n in 0..d {
                let u = self.get(m, n);
                let adj = self.get(-m, -n).scale(self.xi_pow(m * n));
                r.adjoint = r.adjoint.max(u.adjoint().max_abs_diff(&adj));
                let expected = if m == 0 && n == 0 { d as f64 } else { 0.0 };
                r.trace = r.trace.max((u.trace() - C64::new(expected, 0.0)).norm());
                for k in 0..d {
                    for l in 0..d {
                        let v = self.get(k, l);
                        let lhs = v.matmul(u);
                        let rhs = u.matmul(v).scale(self.xi_pow(l * m - k * n));
                        r.commutation = r.commutation.max(lhs.max_abs_diff(&rhs));
                    }
                }
            }
        }
        r
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PauliResiduals {
    pub adjoint: f64,
    pub commutation: f64,
    pub trace: f64,
}

impl PauliResiduals {
    pub fn max(&self) -> f64 {
        self.adjoint.max(self.commutation).max(self.trace)
    }
}

fn root_power(d: usize, k: usize) -> C64 {
    match (k % d) * 4 {
        0 => C64::new(1.0, 0.0),
        x if x == d => C64::new(0.0, 1.0),
        x if x == 2 * d => C64::new(-1.0, 0.0),
        x if x == 3 * d => C64::new(0.0, -1.0),
        _ => C64::from_polar(1.0, 2.0 * PI * (k % d) as f64 / d as f64),
    }
}

/// Pauli operator set for dimension `d`.
pub fn pauli_operator_set(d: usize) -> Result<PauliOperatorSet> {
    PauliOperatorSet::new(d)
}

/// Pauli channel `Φ(ρ) = Σ p_{mn} U_{mn} ρ U_{mn}†` with `probs` row-major
/// `d × d`; Kraus operators keep the row-major `(m, n)` order.
pub fn pauli_channel(d: usize, probs: &[f64]) -> Result<KrausChannel> {
    let set = PauliOperatorSet::new(d)?;
    if probs.len() != d * d {
        return Err(Error::DimensionMismatch(format!(
            "{} probabilities for a {d}x{d} Pauli table",
            probs.len()
        )));
    }
    let mut ch = KrausChannel::new(set.ops, probs.to_vec())?;
    ch.pauli_probs = Some(probs.to_vec());
    Ok(ch)
}

/// Symmetric Pauli channel `p_{mn} = p_m`; `column` must sum to `1/d`.
pub fn pauli_symmetric_channel(d: usize, column: &[f64]) -> Result<KrausChannel> {
    if column.len() != d {
        return Err(Error::DimensionMismatch(format!(
            "{} column probabilities for d = {d}",
            column.len()
        )));
    }
    let table: Vec<f64> = (0..d * d).map(|i| column[i / d]).collect();
    pauli_channel(d, &table)
}

fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
}

fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]])
}

/// Qubit channel with errors `I`, `σx`, `σz` of probabilities `p`, `q`, `r`.
pub fn qubit_ixz_channel(p: f64, q: f64, r: f64) -> Result<KrausChannel> {
    let mut ch = KrausChannel::new(vec![ComplexMatrix::identity(2), pauli_x(), pauli_z()], vec![p, q, r])?;
    // σx = U_{10}, σz = U_{01}.
    ch.pauli_probs = Some(vec![p, r, q, 0.0]);
    Ok(ch)
}
