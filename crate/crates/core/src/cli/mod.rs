//! Command-line front end: `sweep`, `check`, `estimate` and `validate`.
//!
//! Exit codes: 0 success, 1 numerical or suite failure, 2 configuration error.

pub mod config;
pub mod format;
pub mod svg;

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analysis::{
    analytic_estimates, check_theorem, default_reference, estimate_mu_c_crossing, mutual_information_i2, sweep,
    verify_covariance, verify_schur_average,
};
use crate::channels::{CorrelatedChannel, PauliOperatorSet};
use crate::linalg::random::{random_pure_density, random_unitary};
use crate::linalg::von_neumann_entropy;
use crate::optimize::{minimize, oracle_sample, SearchMode};
use crate::states::{invariance_check_me, max_entangled};

pub use config::{ChannelKind, ChannelSpec, ConfigError, ExperimentConfig, Outputs, Overrides};
pub use format::fmt_g;
use svg::{LineChart, Series};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Sweep,
    Check,
    Estimate,
    Validate,
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) | CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.0)
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Numerical(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

/// Loads the config, applies overrides and runs `cmd`. Returns the exit code.
pub fn run(cmd: Command, config: &Path, overrides: &Overrides, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = ExperimentConfig::load(config)
        .and_then(|mut cfg| cfg.apply_overrides(overrides).map(|_| cfg))
        .map_err(CliError::from)
        .and_then(|cfg| match cmd {
            Command::Sweep => cmd_sweep(&cfg, out, err).map(|_| 0),
            Command::Check => cmd_check(&cfg, out, err).map(|_| 0),
            Command::Estimate => cmd_estimate(&cfg, out, err).map(|_| 0),
            Command::Validate => cmd_validate(&cfg, out, err).map(|ok| if ok { 0 } else { 1 }),
        });
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            e.exit_code()
        }
    }
}

fn channel_with_warning(cfg: &ExperimentConfig, err: &mut dyn Write) -> Result<ChannelSpec, CliError> {
    let spec = cfg.channel_spec()?;
    if let Some(w) = &spec.warning {
        writeln!(err, "warning: {w}")?;
    }
    if cfg.optimizer.mode != SearchMode::Full && spec.base.column_probs().is_err() {
        return Err(CliError::Config(format!(
            "mode {} needs a column-symmetric Pauli channel",
            cfg.optimizer.mode.as_str()
        )));
    }
    Ok(spec)
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(name), contents)?;
    Ok(())
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_g).unwrap_or_else(|| "none".into())
}

pub fn cmd_sweep(cfg: &ExperimentConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let spec = channel_with_warning(cfg, err)?;
    let grid = cfg.mu_grid()?;
    let result = sweep(&spec.base, &grid, &cfg.optimizer)?;
    let n_amp = cfg.dim * cfg.dim;

    if result.entries.iter().any(|e| !e.converged) {
        writeln!(err, "warning: optimizer hit the iteration cap at some grid points")?;
    }

    if cfg.outputs.csv {
        let mut csv = String::from("mu,s_min_bits,entanglement_bits,i2_bits");
        for k in 0..n_amp {
            csv.push_str(&format!(",amp_re_{k},amp_im_{k}"));
        }
        csv.push('\n');
        for e in &result.entries {
            let ch = CorrelatedChannel::new(spec.base.clone(), e.mu)?;
            let i2 = mutual_information_i2(&ch, e.min_entropy_bits)?;
            let mut row = vec![
                fmt_g(e.mu),
                fmt_g(e.min_entropy_bits),
                fmt_g(e.entanglement_bits),
                fmt_g(i2),
            ];
            for a in &e.optimal_amplitudes {
                row.push(fmt_g(a.re));
                row.push(fmt_g(a.im));
            }
            csv.push_str(&row.join(","));
            csv.push('\n');
        }
        write_file(&cfg.out_dir, "sweep.csv", &csv)?;
    }

    if cfg.outputs.svg {
        let chart = LineChart {
            title: format!(
                "{} d={} ({} search)",
                cfg.channel.as_str(),
                cfg.dim,
                cfg.optimizer.mode.as_str()
            ),
            x_label: "mu".into(),
            y_label: "bits".into(),
            series: vec![
                Series {
                    label: "S_min".into(),
                    points: result.entries.iter().map(|e| (e.mu, e.min_entropy_bits)).collect(),
                },
                Series {
                    label: "entanglement".into(),
                    points: result.entries.iter().map(|e| (e.mu, e.entanglement_bits)).collect(),
                },
            ],
            marker_x: result.mu_c,
        };
        write_file(&cfg.out_dir, "sweep.svg", &chart.render())?;
    }

    writeln!(out, "mu_c={}", fmt_opt(result.mu_c))?;
    Ok(())
}

fn fmt_complex(z: C64) -> String {
    if z.im < 0.0 {
        format!("{}-{}i", fmt_g(z.re), fmt_g(-z.im))
    } else {
        format!("{}+{}i", fmt_g(z.re), fmt_g(z.im))
    }
}

pub fn cmd_check(cfg: &ExperimentConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let spec = cfg.channel_spec()?;
    if let Some(w) = &spec.warning {
        writeln!(err, "warning: {w}")?;
    }
    let alpha0 = cfg.alpha0.unwrap_or_else(|| default_reference(&spec.base));
    let verdict = check_theorem(&spec.base, alpha0).map_err(|e| match e {
        crate::Error::InvalidArgument(m) => CliError::Config(m),
        other => CliError::from(other),
    })?;
    writeln!(out, "transition_predicted={}", verdict.transition_predicted())?;
    if let Some(w) = &verdict.witness {
        let amps: Vec<String> = w.amplitudes().iter().map(|&z| fmt_complex(z)).collect();
        writeln!(out, "witness={}", amps.join(","))?;
    }
    Ok(())
}

pub fn cmd_estimate(cfg: &ExperimentConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    if cfg.channel != ChannelKind::PauliSymmetric {
        return Err(CliError::Config(format!(
            "estimate needs channel = pauli_symmetric, got {}",
            cfg.channel.as_str()
        )));
    }
    let spec = cfg.channel_spec()?;
    if let Some(w) = &spec.warning {
        writeln!(err, "warning: {w}")?;
    }
    let column = spec.column.expect("symmetric channel has a column");
    let grid = cfg.mu_grid()?;
    let rows = grid
        .iter()
        .map(|&mu| analytic_estimates(cfg.dim, &column, mu))
        .collect::<Result<Vec<_>, _>>()?;
    let crossing = estimate_mu_c_crossing(cfg.dim, &column)?;

    if cfg.outputs.csv {
        let mut csv = String::from("mu,f_me,f_s,r_me,r_s\n");
        for (mu, r) in grid.iter().zip(&rows) {
            csv.push_str(&[fmt_g(*mu), fmt_g(r.f_me), fmt_g(r.f_s), fmt_g(r.r_me), fmt_g(r.r_s)].join(","));
            csv.push('\n');
        }
        write_file(&cfg.out_dir, "estimates.csv", &csv)?;
    }
    if cfg.outputs.svg {
        let curve = |label: &str, f: fn(&crate::analysis::AnalyticEstimates) -> f64| Series {
            label: label.into(),
            points: grid.iter().zip(&rows).map(|(&mu, r)| (mu, f(r))).collect(),
        };
        let chart = LineChart {
            title: format!("fidelity and linear entropy, d={}", cfg.dim),
            x_label: "mu".into(),
            y_label: "value".into(),
            series: vec![
                curve("F_me", |r| r.f_me),
                curve("F_s", |r| r.f_s),
                curve("R_me", |r| r.r_me),
                curve("R_s", |r| r.r_s),
            ],
            marker_x: crossing,
        };
        write_file(&cfg.out_dir, "estimates.svg", &chart.render())?;
    }
    writeln!(out, "mu_c_estimate={}", fmt_opt(crossing))?;
    Ok(())
}

struct SuiteResult {
    name: &'static str,
    residual: f64,
    tolerance: f64,
}

impl SuiteResult {
    fn passed(&self) -> bool {
        self.residual <= self.tolerance
    }
}

fn validation_mus(cfg: &ExperimentConfig) -> Vec<f64> {
    let mid = 0.5 * (cfg.mu_start + cfg.mu_end);
    vec![cfg.mu_start, mid, cfg.mu_end]
}

fn run_suites(cfg: &ExperimentConfig, spec: &ChannelSpec) -> Result<Vec<SuiteResult>, CliError> {
    let d = cfg.dim;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.optimizer.seed);
    let me = max_entangled(d).to_density();
    let mut suites = Vec::new();

    let mut invariance: f64 = 0.0;
    for _ in 0..100 {
        invariance = invariance.max(invariance_check_me(d, &random_unitary(d, &mut rng))?);
    }
    suites.push(SuiteResult {
        name: "fixed_point_invariance",
        residual: invariance,
        tolerance: 1e-12,
    });
    let phi_c = spec.base.apply_phi_c(&me)?.max_abs_diff(&me);
    suites.push(SuiteResult {
        name: "fixed_point_correlated",
        residual: phi_c,
        tolerance: 1e-12,
    });
    let s_me = von_neumann_entropy(&CorrelatedChannel::new(spec.base.clone(), 1.0)?.apply(&me)?)?;
    suites.push(SuiteResult {
        name: "fixed_point_entropy",
        residual: s_me,
        tolerance: 1e-8,
    });

    let pauli = PauliOperatorSet::new(d)?;
    let probe = random_pure_density(d * d, &mut rng);
    let (mut cov, mut schur): (f64, f64) = (0.0, 0.0);
    for mu in validation_mus(cfg) {
        let ch = CorrelatedChannel::new(spec.base.clone(), mu)?;
        for rho in [&me, &probe] {
            cov = cov.max(verify_covariance(&ch, rho, &pauli)?);
            schur = schur.max(verify_schur_average(&ch, rho, &pauli)?);
        }
    }
    suites.push(SuiteResult {
        name: "covariance",
        residual: cov,
        tolerance: 1e-9,
    });
    suites.push(SuiteResult {
        name: "schur_average",
        residual: schur,
        tolerance: 1e-9,
    });
    suites.push(SuiteResult {
        name: "pauli_algebra",
        residual: pauli.identity_residuals().max(),
        tolerance: 1e-10,
    });

    let mut excess = f64::NEG_INFINITY;
    for mu in validation_mus(cfg) {
        let ch = CorrelatedChannel::new(spec.base.clone(), mu)?;
        let best = minimize(&ch, &cfg.optimizer)?;
        let sampled = oracle_sample(&ch, cfg.oracle_samples, cfg.optimizer.seed)?;
        excess = excess.max(best.entropy_bits - sampled.entropy_bits);
    }
    suites.push(SuiteResult {
        name: "optimizer_vs_oracle",
        residual: excess,
        tolerance: 1e-6,
    });
    Ok(suites)
}

/// Runs every invariant suite and reports each; `Ok(false)` if any failed.
pub fn cmd_validate(cfg: &ExperimentConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<bool, CliError> {
    let spec = channel_with_warning(cfg, err)?;
    let suites = run_suites(cfg, &spec)?;
    let mut all = true;
    for s in &suites {
        all &= s.passed();
        writeln!(
            out,
            "{} {} residual={} tol={}",
            if s.passed() { "PASS" } else { "FAIL" },
            s.name,
            fmt_g(s.residual),
            fmt_g(s.tolerance)
        )?;
    }
    writeln!(out, "validate={}", if all { "pass" } else { "fail" })?;
    Ok(all)
}
