//! Minimum-output-entropy search.
//!
//! Three routes find `min_ψ S(E(|ψ⟩⟨ψ|))`:
//!
//! - [`minimize_full`]: multi-start Nelder–Mead over all two-qudit pure
//!   states (`2d²` real coordinates),
//! - [`minimize_ansatz`]: the same search restricted to `Σ_j a_j |j, j⟩`,
//!   using the closed-form output of symmetric Pauli channels,
//! - [`oracle_sample`]: random sampling of pure states, an independent upper
//!   bound for the other two.
//!
//! Every route evaluates the maximally entangled state and product basis
//! states in addition to its random starts.

pub mod ansatz;
pub mod nelder_mead;

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channels::CorrelatedChannel;
use crate::error::{Error, Result};
use crate::linalg::random::random_state_vector;
use crate::linalg::{eigvals_hermitian, entropy_from_eigenvalues};
use crate::states::{
    ansatz_state, basis_separable, entanglement_of, from_params, gauge_fixed, max_entangled, params_of, ParamVector,
    PureState, SymmetricAnsatz,
};
use crate::tolerances;
use nelder_mead::SimplexOptions;

pub use ansatz::{ansatz_entropy, ansatz_output};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// All two-qudit pure states.
    Full,
    /// `Σ_j a_j |j, j⟩` with complex `a`.
    Ansatz,
    /// `Σ_j a_j |j, j⟩` with real `a`.
    RealAnsatz,
}

impl SearchMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SearchMode::Full => "full",
            SearchMode::Ansatz => "ansatz",
            SearchMode::RealAnsatz => "real_ansatz",
        }
    }
}

impl std::str::FromStr for SearchMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(SearchMode::Full),
            "ansatz" => Ok(SearchMode::Ansatz),
            "real_ansatz" => Ok(SearchMode::RealAnsatz),
            other => Err(Error::InvalidArgument(format!("unknown search mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    /// Random starts in addition to the seeded ones.
    pub restarts: usize,
    /// Simplex iterations per descent.
    pub max_iters: usize,
    pub xtol: f64,
    pub ftol: f64,
    pub seed: u64,
    pub mode: SearchMode,
}

impl OptimizerConfig {
    pub fn full() -> Self {
        Self {
            restarts: 32,
            max_iters: 20_000,
            xtol: 1e-9,
            ftol: 1e-12,
            seed: 42,
            mode: SearchMode::Full,
        }
    }

    pub fn ansatz() -> Self {
        Self {
            restarts: 16,
            mode: SearchMode::Ansatz,
            ..Self::full()
        }
    }

    pub fn for_mode(mode: SearchMode) -> Self {
        match mode {
            SearchMode::Full => Self::full(),
            SearchMode::Ansatz | SearchMode::RealAnsatz => Self { mode, ..Self::ansatz() },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_iters == 0 {
            return Err(Error::InvalidArgument("restarts and max_iters must be positive".into()));
        }
        if !(self.xtol > 0.0 && self.ftol > 0.0) {
            return Err(Error::InvalidArgument("tolerances must be positive".into()));
        }
        Ok(())
    }

    /// Entropies within this window are considered tied.
    fn tie_window(&self) -> f64 {
        self.ftol.max(tolerances::ENTROPY_TIE)
    }
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self::full()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinEntropyResult {
    pub entropy_bits: f64,
    pub state: PureState,
    pub entanglement_bits: f64,
    pub iterations_used: usize,
    pub converged: bool,
}

/// `S(E(|ψ⟩⟨ψ|))` in bits.
pub fn objective(ch: &CorrelatedChannel, psi: &PureState) -> Result<f64> {
    entropy_from_eigenvalues(&eigvals_hermitian(&ch.apply_pure(psi.amplitudes())?)?)
}

struct Candidate {
    entropy: f64,
    state: PureState,
    entanglement: f64,
    iterations: usize,
    converged: bool,
}

/// Lowest entropy wins; within `tie` the less entangled candidate wins.
/// Candidates are scanned in order, so the choice is deterministic.
fn select(cands: Vec<Candidate>, tie: f64) -> Candidate {
    let mut iter = cands.into_iter();
    let mut best = iter.next().expect("at least one candidate");
    let mut total_iters = best.iterations;
    for c in iter {
        total_iters += c.iterations;
        let better = c.entropy < best.entropy - tie
            || ((c.entropy - best.entropy).abs() <= tie && c.entanglement < best.entanglement - 1e-9)
            || ((c.entropy - best.entropy).abs() <= tie
                && (c.entanglement - best.entanglement).abs() <= 1e-9
                && c.entropy < best.entropy);
        if better {
            best = c;
        }
    }
    best.iterations = total_iters;
    best
}

fn into_result(c: Candidate) -> MinEntropyResult {
    MinEntropyResult {
        entropy_bits: c.entropy,
        state: c.state,
        entanglement_bits: c.entanglement,
        iterations_used: c.iterations,
        converged: c.converged,
    }
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Two passes of simplex descent: a coarse one from `x0`, then a fresh small
/// simplex around its result.
fn descend<F: Fn(&[f64]) -> f64>(f: F, x0: &[f64], cfg: &OptimizerConfig) -> nelder_mead::SimplexOutcome {
    let coarse = SimplexOptions {
        max_iters: cfg.max_iters,
        xtol: cfg.xtol,
        ftol: cfg.ftol,
        initial_step: 0.25,
    };
    let first = nelder_mead::minimize(&f, x0, &coarse);
    let fine = SimplexOptions {
        initial_step: 0.01,
        ..coarse
    };
    let second = nelder_mead::minimize(&f, &first.x, &fine);
    let iterations = first.iterations + second.iterations;
    if second.fx <= first.fx {
        nelder_mead::SimplexOutcome { iterations, ..second }
    } else {
        nelder_mead::SimplexOutcome { iterations, ..first }
    }
}

/// Multi-start simplex search over all pure states of two qudits.
pub fn minimize_full(ch: &CorrelatedChannel, cfg: &OptimizerConfig) -> Result<MinEntropyResult> {
    cfg.validate()?;
    let d = ch.dim();
    let n = d * d;
    let mut starts: Vec<Vec<f64>> = vec![
        params_of(&max_entangled(d)).coords,
        params_of(&basis_separable(d, 0, 0)?).coords,
    ];
    for r in 0..cfg.restarts {
        let v = random_state_vector(n, &mut stream_rng(cfg.seed, r as u64));
        starts.push(v.iter().flat_map(|z| [z.re, z.im]).collect());
    }

    let f = |x: &[f64]| -> f64 {
        match from_params(&ParamVector::new(x.to_vec()), n) {
            Ok(psi) => objective(ch, &psi).unwrap_or(f64::INFINITY),
            Err(_) => f64::INFINITY,
        }
    };

    let cands: Vec<Candidate> = starts
        .par_iter()
        .map(|x0| -> Result<Candidate> {
            let out = descend(f, x0, cfg);
            let state = from_params(&ParamVector::new(out.x), n)?;
            let entropy = objective(ch, &state)?;
            let entanglement = entanglement_of(&state, d)?;
            Ok(Candidate {
                entropy,
                state,
                entanglement,
                iterations: out.iterations,
                converged: out.converged,
            })
        })
        .collect::<Result<_>>()?;
    Ok(into_result(select(cands, cfg.tie_window())))
}

fn ansatz_coeffs(x: &[f64], real: bool) -> Vec<C64> {
    if real {
        x.iter().map(|&r| C64::new(r, 0.0)).collect()
    } else {
        x.chunks_exact(2).map(|c| C64::new(c[0], c[1])).collect()
    }
}

/// Search over `Σ_j a_j |j, j⟩` for symmetric Pauli channels.
pub fn minimize_ansatz(ch: &CorrelatedChannel, cfg: &OptimizerConfig) -> Result<MinEntropyResult> {
    cfg.validate()?;
    let p = ch.base().column_probs()?;
    let d = p.len();
    let mu = ch.mu();
    let real = cfg.mode == SearchMode::RealAnsatz;
    let width = if real { 1 } else { 2 };

    let embed = |a: &[f64]| -> Vec<f64> {
        if real {
            a.to_vec()
        } else {
            a.iter().flat_map(|&x| [x, 0.0]).collect()
        }
    };
    let uniform = vec![1.0 / (d as f64).sqrt(); d];
    let mut first = vec![0.0; d];
    first[0] = 1.0;
    let mut starts = vec![embed(&uniform), embed(&first)];
    for r in 0..cfg.restarts {
        let v = random_state_vector(d, &mut stream_rng(cfg.seed, r as u64));
        starts.push(if real {
            v.iter().map(|z| z.re).collect()
        } else {
            v.iter().flat_map(|z| [z.re, z.im]).collect()
        });
    }
    debug_assert!(starts.iter().all(|s| s.len() == width * d));

    let f = |x: &[f64]| -> f64 {
        match gauge_fixed(ansatz_coeffs(x, real)) {
            Ok(a) => ansatz_entropy(&p, mu, &a).unwrap_or(f64::INFINITY),
            Err(_) => f64::INFINITY,
        }
    };

    let cands: Vec<Candidate> = starts
        .par_iter()
        .map(|x0| -> Result<Candidate> {
            let out = descend(f, x0, cfg);
            let a = gauge_fixed(ansatz_coeffs(&out.x, real))?;
            let entropy = ansatz_entropy(&p, mu, &a)?;
            let state = ansatz_state(&SymmetricAnsatz::new(d, 0, a)?);
            let entanglement = entanglement_of(&state, d)?;
            Ok(Candidate {
                entropy,
                state,
                entanglement,
                iterations: out.iterations,
                converged: out.converged,
            })
        })
        .collect::<Result<_>>()?;
    Ok(into_result(select(cands, cfg.tie_window())))
}

/// Dispatches on `cfg.mode`.
pub fn minimize(ch: &CorrelatedChannel, cfg: &OptimizerConfig) -> Result<MinEntropyResult> {
    match cfg.mode {
        SearchMode::Full => minimize_full(ch, cfg),
        SearchMode::Ansatz | SearchMode::RealAnsatz => minimize_ansatz(ch, cfg),
    }
}

const ORACLE_CHUNK: usize = 1024;

/// Best of `n_samples` uniformly random pure states, the maximally entangled
/// state and every product basis state `|i, j⟩`.
pub fn oracle_sample(ch: &CorrelatedChannel, n_samples: usize, seed: u64) -> Result<MinEntropyResult> {
    if n_samples < 1000 {
        return Err(Error::InvalidArgument(format!(
            "oracle needs at least 1000 samples, got {n_samples}"
        )));
    }
    let d = ch.dim();
    let n = d * d;
    let evaluate = |state: PureState| -> Result<Candidate> {
        let entropy = objective(ch, &state)?;
        Ok(Candidate {
            entropy,
            entanglement: f64::NAN,
            state,
            iterations: 1,
            converged: true,
        })
    };

    let mut seeded = vec![evaluate(max_entangled(d))?];
    for i in 0..d {
        for j in 0..d {
            seeded.push(evaluate(basis_separable(d, i, j)?)?);
        }
    }

    let chunks = n_samples.div_ceil(ORACLE_CHUNK);
    let sampled: Vec<Candidate> = (0..chunks)
        .into_par_iter()
        .map(|c| -> Result<Candidate> {
            let mut rng = stream_rng(seed, c as u64);
            let count = ORACLE_CHUNK.min(n_samples - c * ORACLE_CHUNK);
            let mut best: Option<Candidate> = None;
            for _ in 0..count {
                let cand = evaluate(PureState::new(random_state_vector(n, &mut rng))?)?;
                if best.as_ref().is_none_or(|b| cand.entropy < b.entropy) {
                    best = Some(cand);
                }
            }
            Ok(best.expect("non-empty chunk"))
        })
        .collect::<Result<_>>()?;

    let mut all: Vec<Candidate> = seeded.into_iter().chain(sampled).collect();
    for c in all.iter_mut() {
        c.entanglement = entanglement_of(&c.state, d)?;
    }
    let mut best = select(all, tolerances::ENTROPY_TIE);
    best.iterations = n_samples + 1 + n;
    Ok(into_result(best))
}
