use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::channels::{CorrelatedChannel, KrausChannel};
use crate::error::{Error, Result};
use crate::optimize::{minimize, MinEntropyResult, OptimizerConfig, SearchMode};
use crate::tolerances;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepEntry {
    pub mu: f64,
    pub min_entropy_bits: f64,
    pub entanglement_bits: f64,
    pub optimal_amplitudes: Vec<C64>,
    pub converged: bool,
}

impl SweepEntry {
    fn from_result(mu: f64, r: MinEntropyResult) -> Self {
        Self {
            mu,
            min_entropy_bits: r.entropy_bits,
            entanglement_bits: r.entanglement_bits,
            optimal_amplitudes: r.state.amplitudes().to_vec(),
            converged: r.converged,
        }
    }
}

/// Minimum output entropy and optimal-input entanglement along a `mu` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub mu_grid: Vec<f64>,
    pub entries: Vec<SweepEntry>,
    pub mu_c: Option<f64>,
    pub method: SearchMode,
}

/// `points` evenly spaced values from `start` to `end` inclusive.
pub fn uniform_grid(start: f64, end: f64, points: usize) -> Result<Vec<f64>> {
    if points < 2 || !(0.0..=1.0).contains(&start) || !(0.0..=1.0).contains(&end) || start >= end {
        return Err(Error::InvalidArgument(format!(
            "bad grid: {points} points on [{start}, {end}]"
        )));
    }
    let step = (end - start) / (points - 1) as f64;
    Ok((0..points)
        .map(|i| if i + 1 == points { end } else { start + step * i as f64 })
        .collect())
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 2 {
        return Err(Error::InvalidArgument("a sweep needs at least two grid points".into()));
    }
    if grid.iter().any(|mu| !(0.0..=1.0).contains(mu)) {
        return Err(Error::InvalidArgument("grid values must lie in [0, 1]".into()));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("grid must be strictly increasing".into()));
    }
    Ok(())
}

/// Optimizes at every grid point, then locates the entanglement jump and
/// refines it with further optimizations.
pub fn sweep(base: &KrausChannel, mu_grid: &[f64], cfg: &OptimizerConfig) -> Result<SweepResult> {
    validate_grid(mu_grid)?;
    cfg.validate()?;
    let optimize_at =
        |mu: f64| -> Result<MinEntropyResult> { minimize(&CorrelatedChannel::new(base.clone(), mu)?, cfg) };

    let entries: Vec<SweepEntry> = mu_grid
        .par_iter()
        .map(|&mu| optimize_at(mu).map(|r| SweepEntry::from_result(mu, r)))
        .collect::<Result<_>>()?;

    let mut result = SweepResult {
        mu_grid: mu_grid.to_vec(),
        entries,
        mu_c: None,
        method: cfg.mode,
    };
    result.mu_c = detect_transition(&result, base.dim(), |mu| optimize_at(mu).map(|r| r.entanglement_bits))?;
    Ok(result)
}

/// First pair of neighbouring grid points whose entanglement lies on
/// opposite sides of `log₂(d)/2`.
pub fn transition_bracket(sweep: &SweepResult, d: usize) -> Option<(usize, usize)> {
    let threshold = (d as f64).log2() / 2.0;
    sweep
        .entries
        .windows(2)
        .position(|w| (w[0].entanglement_bits >= threshold) != (w[1].entanglement_bits >= threshold))
        .map(|i| (i, i + 1))
}

/// Bisects the first entanglement crossing down to the refinement width,
/// calling `probe(mu)` for the optimal-input entanglement at each midpoint.
/// Returns `None` when the entanglement never crosses `log₂(d)/2`.
pub fn detect_transition<F>(sweep: &SweepResult, d: usize, mut probe: F) -> Result<Option<f64>>
where
    F: FnMut(f64) -> Result<f64>,
{
    let Some((i, j)) = transition_bracket(sweep, d) else {
        return Ok(None);
    };
    let threshold = (d as f64).log2() / 2.0;
    let mut lo = sweep.entries[i].mu;
    let mut hi = sweep.entries[j].mu;
    let lo_side = sweep.entries[i].entanglement_bits >= threshold;
    while hi - lo > tolerances::TRANSITION_WIDTH {
        let mid = 0.5 * (lo + hi);
        if (probe(mid)? >= threshold) == lo_side {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::qubit_ixz_channel;

    fn synthetic(ents: &[f64]) -> SweepResult {
        let grid = uniform_grid(0.0, 1.0, ents.len()).unwrap();
        let entries = grid
            .iter()
            .zip(ents)
            .map(|(&mu, &e)| SweepEntry {
                mu,
                min_entropy_bits: 0.0,
                entanglement_bits: e,
                optimal_amplitudes: vec![],
                converged: true,
            })
            .collect();
        SweepResult {
            mu_grid: grid,
            entries,
            mu_c: None,
            method: SearchMode::Full,
        }
    }

    #[test]
    fn grid_construction() {
        let g = uniform_grid(0.0, 1.0, 51).unwrap();
        assert_eq!(g.len(), 51);
        assert_eq!(g[50], 1.0);
        assert!((g[25] - 0.5).abs() < 1e-15);
        assert!(uniform_grid(0.5, 0.5, 3).is_err());
        assert!(uniform_grid(0.0, 1.0, 1).is_err());
        assert!(uniform_grid(-0.1, 1.0, 5).is_err());
    }

    #[test]
    fn flat_entanglement_has_no_transition() {
        let s = synthetic(&[0.0; 11]);
        let mut calls = 0;
        let found = detect_transition(&s, 2, |_| {
            calls += 1;
            Ok(0.0)
        })
        .unwrap();
        assert_eq!(found, None);
        assert_eq!(calls, 0);
    }

    #[test]
    fn step_is_bracketed_and_refined() {
        let mut ents = vec![0.0; 11];
        for e in ents.iter_mut().skip(4) {
            *e = 1.0;
        }
        let s = synthetic(&ents);
        // True step at 0.337 inside (0.3, 0.4).
        let mu_c = detect_transition(&s, 2, |mu| Ok(if mu >= 0.337 { 1.0 } else { 0.0 }))
            .unwrap()
            .unwrap();
        assert!(mu_c > 0.3 && mu_c < 0.4);
        assert!((mu_c - 0.337).abs() <= tolerances::TRANSITION_WIDTH);
    }

    #[test]
    fn falling_step_is_also_found() {
        let s = synthetic(&[1.0, 1.0, 1.0, 0.0, 0.0]);
        let mu_c = detect_transition(&s, 2, |mu| Ok(if mu < 0.6 { 1.0 } else { 0.0 }))
            .unwrap()
            .unwrap();
        assert!((mu_c - 0.6).abs() <= tolerances::TRANSITION_WIDTH);
    }

    #[test]
    fn rejects_bad_grids() {
        let ch = qubit_ixz_channel(0.3, 0.2, 0.5).unwrap();
        let cfg = OptimizerConfig::full();
        assert!(sweep(&ch, &[0.5], &cfg).is_err());
        assert!(sweep(&ch, &[0.5, 0.4], &cfg).is_err());
        assert!(sweep(&ch, &[0.5, 1.2], &cfg).is_err());
    }

    #[test]
    fn identity_channel_sweep_is_noiseless() {
        let ch = KrausChannel::identity(2);
        let cfg = OptimizerConfig {
            restarts: 2,
            ..OptimizerConfig::full()
        };
        let s = sweep(&ch, &uniform_grid(0.0, 1.0, 5).unwrap(), &cfg).unwrap();
        assert!(s.entries.iter().all(|e| e.min_entropy_bits < 1e-9));
        assert_eq!(s.mu_c, None);
    }
}
