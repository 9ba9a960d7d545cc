//! Closed-form channel output for diagonal ansatz inputs on symmetric Pauli
//! channels (`p_{mn} = p_m`, `Σ_m p_m = 1/d`).
//!
//! For `ψ₀ = Σ_j a_j |j, j⟩`:
//!
//! ```text
//! Φ_c(ψ₀)      = Σ_{m,i,j} d p_m a_i a_j* |i+m, i+m⟩⟨j+m, j+m|
//! (Φ⊗Φ*)(ψ₀)   = d² Σ_{i,m,n} p_m p_n |a_i|² |i+m, i+n⟩⟨i+m, i+n|
//! E(ψ₀)        = (1 − μ)(Φ⊗Φ*)(ψ₀) + μ Φ_c(ψ₀)
//! ```
//!
//! The output is diagonal except on the span of `{|x, x⟩}`, so its spectrum
//! is the spectrum of one `d × d` block plus the remaining diagonal entries.

use num_complex::Complex64 as C64;

use crate::error::Result;
use crate::linalg::{eigvals_hermitian, entropy_from_eigenvalues, ComplexMatrix};

/// Product-part weight `d² Σ_i |a_i|² p_{x−i} p_{y−i}` at `|x, y⟩`.
fn product_weight(p: &[f64], weights: &[f64], x: usize, y: usize) -> f64 {
    let d = p.len();
    let dd = (d * d) as f64;
    dd * (0..d)
        .map(|i| weights[i] * p[(x + d - i) % d] * p[(y + d - i) % d])
        .sum::<f64>()
}

/// Correlated-part entry `Σ_m d p_m a_{x−m} a*_{y−m}` between `|x, x⟩` and `|y, y⟩`.
fn correlated_entry(p: &[f64], a: &[C64], x: usize, y: usize) -> C64 {
    let d = p.len();
    (0..d)
        .map(|m| a[(x + d - m) % d] * a[(y + d - m) % d].conj() * (d as f64 * p[m]))
        .sum()
}

/// Full `d² × d²` output matrix.
pub fn ansatz_output(p: &[f64], mu: f64, a: &[C64]) -> ComplexMatrix {
    let d = p.len();
    assert_eq!(a.len(), d, "ansatz length mismatch");
    let weights: Vec<f64> = a.iter().map(|z| z.norm_sqr()).collect();
    let n = d * d;
    let mut out = ComplexMatrix::zeros(n, n);
    for x in 0..d {
        for y in 0..d {
            out[(x * d + y, x * d + y)] += C64::new((1.0 - mu) * product_weight(p, &weights, x, y), 0.0);
        }
    }
    if mu > 0.0 {
        for x in 0..d {
            for y in 0..d {
                out[(x * d + x, y * d + y)] += correlated_entry(p, a, x, y) * mu;
            }
        }
    }
    out
}

/// Output entropy in bits, from the `|x, x⟩` block and the off-block diagonal.
pub fn ansatz_entropy(p: &[f64], mu: f64, a: &[C64]) -> Result<f64> {
    let d = p.len();
    let weights: Vec<f64> = a.iter().map(|z| z.norm_sqr()).collect();
    let block = ComplexMatrix::from_fn(d, d, |x, y| {
        let mut v = correlated_entry(p, a, x, y) * mu;
        if x == y {
            v += (1.0 - mu) * product_weight(p, &weights, x, x);
        }
        v
    });
    let mut spectrum = eigvals_hermitian(&block)?;
    for x in 0..d {
        for y in 0..d {
            if x != y {
                spectrum.push((1.0 - mu) * product_weight(p, &weights, x, y));
            }
        }
    }
    entropy_from_eigenvalues(&spectrum)
}
