//! Flat `key = value` experiment files. Blank lines and `#` comments are
//! ignored; every key may appear once.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use crate::analysis::uniform_grid;
use crate::channels::{pauli_channel, pauli_symmetric_channel, qubit_ixz_channel, KrausChannel};
use crate::optimize::{OptimizerConfig, SearchMode};

/// Sums closer than this to the target are renormalized without comment.
const SILENT_RENORMALIZATION: f64 = 1e-6;
/// Largest relative error in a symmetric column that is still treated as
/// rounding and rescaled.
const MAX_COLUMN_RESCALE: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelKind {
    QubitIxz,
    PauliSymmetric,
    PauliGeneral,
}

impl ChannelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ChannelKind::QubitIxz => "qubit_ixz",
            ChannelKind::PauliSymmetric => "pauli_symmetric",
            ChannelKind::PauliGeneral => "pauli_general",
        }
    }
}

impl std::str::FromStr for ChannelKind {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "qubit_ixz" => Ok(ChannelKind::QubitIxz),
            "pauli_symmetric" => Ok(ChannelKind::PauliSymmetric),
            "pauli_general" => Ok(ChannelKind::PauliGeneral),
            other => err(format!("unknown channel kind '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Outputs {
    pub csv: bool,
    pub svg: bool,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub mu_points: Option<usize>,
    pub seed: Option<u64>,
    pub mode: Option<SearchMode>,
    pub no_svg: bool,
    pub out: Option<PathBuf>,
}

/// Optimizer keys given explicitly in the file; the rest follow the mode.
#[derive(Debug, Clone, Default, PartialEq)]
struct OptimizerKeys {
    restarts: Option<usize>,
    max_iters: Option<usize>,
    xtol: Option<f64>,
    ftol: Option<f64>,
    seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub dim: usize,
    pub channel: ChannelKind,
    pub probs: Vec<f64>,
    pub mu_start: f64,
    pub mu_end: f64,
    pub mu_points: usize,
    pub optimizer: OptimizerConfig,
    pub outputs: Outputs,
    pub out_dir: PathBuf,
    /// Reference operator for the eigenvector check.
    pub alpha0: Option<usize>,
    /// Random states drawn by the oracle comparison in `validate`.
    pub oracle_samples: usize,
    keys: OptimizerKeys,
}

/// Channel built from a config, with the column for symmetric kinds.
#[derive(Debug, Clone)]
pub struct ChannelSpec {
    pub base: KrausChannel,
    pub column: Option<Vec<f64>>,
    pub warning: Option<String>,
}

fn parse_value<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, ConfigError> {
    v.parse()
        .map_err(|_| ConfigError(format!("invalid value '{v}' for '{key}'")))
}

fn parse_list(key: &str, v: &str) -> Result<Vec<f64>, ConfigError> {
    v.split(',').map(|x| parse_value::<f64>(key, x.trim())).collect()
}

fn build_optimizer(mode: SearchMode, keys: &OptimizerKeys) -> OptimizerConfig {
    let base = OptimizerConfig::for_mode(mode);
    OptimizerConfig {
        restarts: keys.restarts.unwrap_or(base.restarts),
        max_iters: keys.max_iters.unwrap_or(base.max_iters),
        xtol: keys.xtol.unwrap_or(base.xtol),
        ftol: keys.ftol.unwrap_or(base.ftol),
        seed: keys.seed.unwrap_or(base.seed),
        mode,
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut map: BTreeMap<String, String> = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return err(format!("line {}: expected key = value", lineno + 1));
            };
            let k = k.trim().to_string();
            if map.insert(k.clone(), v.trim().to_string()).is_some() {
                return err(format!("line {}: duplicate key '{k}'", lineno + 1));
            }
        }

        let mut take = |k: &str| map.remove(k);
        let channel: ChannelKind = match take("channel") {
            Some(v) => v.parse()?,
            None => return err("missing key 'channel'"),
        };
        let dim = match take("dim") {
            Some(v) => parse_value("dim", &v)?,
            None if channel == ChannelKind::QubitIxz => 2,
            None => return err("missing key 'dim'"),
        };
        let probs = match take("probs") {
            Some(v) => parse_list("probs", &v)?,
            None => return err("missing key 'probs'"),
        };
        let mu_start = take("mu_start")
            .map(|v| parse_value("mu_start", &v))
            .transpose()?
            .unwrap_or(0.0);
        let mu_end = take("mu_end")
            .map(|v| parse_value("mu_end", &v))
            .transpose()?
            .unwrap_or(1.0);
        let mu_points = take("mu_points")
            .map(|v| parse_value("mu_points", &v))
            .transpose()?
            .unwrap_or(51);
        let mode: SearchMode = match take("mode") {
            Some(v) => v.parse().map_err(|e: crate::Error| ConfigError(e.to_string()))?,
            None => SearchMode::Full,
        };
        let keys = OptimizerKeys {
            restarts: take("restarts").map(|v| parse_value("restarts", &v)).transpose()?,
            max_iters: take("max_iters").map(|v| parse_value("max_iters", &v)).transpose()?,
            xtol: take("xtol").map(|v| parse_value("xtol", &v)).transpose()?,
            ftol: take("ftol").map(|v| parse_value("ftol", &v)).transpose()?,
            seed: take("seed").map(|v| parse_value("seed", &v)).transpose()?,
        };
        let outputs = match take("outputs") {
            None => Outputs { csv: true, svg: true },
            Some(v) => {
                let mut o = Outputs { csv: false, svg: false };
                for item in v.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                    match item {
                        "csv" => o.csv = true,
                        "svg" => o.svg = true,
                        other => return err(format!("unknown output '{other}'")),
                    }
                }
                o
            }
        };
        let out_dir = take("out_dir")
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("out"));
        let alpha0 = take("alpha0").map(|v| parse_value("alpha0", &v)).transpose()?;
        let oracle_samples = take("oracle_samples")
            .map(|v| parse_value("oracle_samples", &v))
            .transpose()?
            .unwrap_or(100_000);
        if let Some(k) = map.keys().next() {
            return err(format!("unknown key '{k}'"));
        }

        let cfg = Self {
            dim,
            channel,
            probs,
            mu_start,
            mu_end,
            mu_points,
            optimizer: build_optimizer(mode, &keys),
            outputs,
            out_dir,
            alpha0,
            oracle_samples,
            keys,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn apply_overrides(&mut self, o: &Overrides) -> Result<(), ConfigError> {
        if let Some(n) = o.mu_points {
            self.mu_points = n;
        }
        if let Some(seed) = o.seed {
            self.keys.seed = Some(seed);
        }
        let mode = o.mode.unwrap_or(self.optimizer.mode);
        self.optimizer = build_optimizer(mode, &self.keys);
        if o.no_svg {
            self.outputs.svg = false;
        }
        if let Some(dir) = &o.out {
            self.out_dir = dir.clone();
        }
        self.validate()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.dim < 2 {
            return err(format!("dim must be at least 2, got {}", self.dim));
        }
        if self.channel == ChannelKind::QubitIxz && self.dim != 2 {
            return err("qubit_ixz requires dim = 2");
        }
        self.mu_grid()?;
        self.optimizer.validate().map_err(|e| ConfigError(e.to_string()))?;
        if self.oracle_samples < 1000 {
            return err("oracle_samples must be at least 1000");
        }
        self.channel_spec().map(|_| ())
    }

    pub fn mu_grid(&self) -> Result<Vec<f64>, ConfigError> {
        if !(0.0..=1.0).contains(&self.mu_start) || !(0.0..=1.0).contains(&self.mu_end) {
            return err(format!("mu range [{}, {}] outside [0, 1]", self.mu_start, self.mu_end));
        }
        uniform_grid(self.mu_start, self.mu_end, self.mu_points).map_err(|e| ConfigError(e.to_string()))
    }

    /// Builds the base channel, normalizing the probabilities according to
    /// the channel kind.
    pub fn channel_spec(&self) -> Result<ChannelSpec, ConfigError> {
        let d = self.dim;
        let p = &self.probs;
        if p.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return err("probabilities must be finite and nonnegative");
        }
        let sum: f64 = p.iter().sum();
        let expect_len = match self.channel {
            ChannelKind::QubitIxz => 3,
            ChannelKind::PauliSymmetric => d,
            ChannelKind::PauliGeneral => d * d,
        };
        if p.len() != expect_len {
            return err(format!(
                "{} with dim {d} needs {expect_len} probabilities, got {}",
                self.channel.as_str(),
                p.len()
            ));
        }
        if sum <= 0.0 {
            return err("probabilities sum to zero");
        }
        let to_config = |e: crate::Error| ConfigError(e.to_string());
        match self.channel {
            ChannelKind::QubitIxz | ChannelKind::PauliGeneral => {
                if (sum - 1.0).abs() > SILENT_RENORMALIZATION {
                    return err(format!("probabilities sum to {sum}, expected 1"));
                }
                let q: Vec<f64> = p.iter().map(|x| x / sum).collect();
                let base = if self.channel == ChannelKind::QubitIxz {
                    qubit_ixz_channel(q[0], q[1], q[2])
                } else {
                    pauli_channel(d, &q)
                }
                .map_err(to_config)?;
                Ok(ChannelSpec {
                    base,
                    column: None,
                    warning: None,
                })
            }
            ChannelKind::PauliSymmetric => {
                let target = 1.0 / d as f64;
                if (sum / target - 1.0).abs() > MAX_COLUMN_RESCALE {
                    return err(format!("column sums to {sum}, expected 1/{d}"));
                }
                let warning = ((sum - target).abs() > SILENT_RENORMALIZATION)
                    .then(|| format!("column sums to {sum}; rescaled by {} to sum to 1/{d}", target / sum));
                let column: Vec<f64> = p.iter().map(|x| x * target / sum).collect();
                let base = pauli_symmetric_channel(d, &column).map_err(to_config)?;
                Ok(ChannelSpec {
                    base,
                    column: Some(column),
                    warning,
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const QUBIT: &str = "channel = qubit_ixz\nprobs = 0.3, 0.2, 0.5\n";
    const QUTRIT: &str =
        "# qutrit preset\ndim = 3\nchannel = pauli_symmetric\nprobs = 0.08,0.18,0.0733\nmode = ansatz\n";

    #[test]
    fn defaults() {
        let c = ExperimentConfig::parse(QUBIT).unwrap();
        assert_eq!(c.dim, 2);
        assert_eq!(c.mu_points, 51);
        assert_eq!(c.optimizer, OptimizerConfig::full());
        assert_eq!(c.outputs, Outputs { csv: true, svg: true });
        assert_eq!(c.mu_grid().unwrap().len(), 51);
    }

    #[test]
    fn qutrit_column_is_rescaled_with_warning() {
        let c = ExperimentConfig::parse(QUTRIT).unwrap();
        assert_eq!(c.optimizer.mode, SearchMode::Ansatz);
        let spec = c.channel_spec().unwrap();
        assert!(spec.warning.is_some());
        let col = spec.column.unwrap();
        assert!((col.iter().sum::<f64>() - 1.0 / 3.0).abs() < 1e-15);
        assert!((col[2] - 0.0733 / 0.9999).abs() < 1e-15);
    }

    #[test]
    fn comments_and_whitespace() {
        let text = "\n  # leading comment\nchannel=qubit_ixz   # trailing\n probs =1,0,0\nmu_points = 5\n";
        let c = ExperimentConfig::parse(text).unwrap();
        assert_eq!(c.probs, vec![1.0, 0.0, 0.0]);
        assert_eq!(c.mu_points, 5);
    }

    #[test]
    fn rejections() {
        for bad in [
            "channel = qubit_ixz\nprobs = 0.3,0.2,0.4\n",
            "channel = qubit_ixz\nprobs = 0.3,0.2\n",
            "channel = qubit_ixz\nprobs = 0.5,-0.2,0.7\n",
            "channel = qubit_ixz\nprobs = 0.3,0.2,0.5\nmu_end = 1.5\n",
            "channel = qubit_ixz\nprobs = 0.3,0.2,0.5\nmu_start = -0.1\n",
            "channel = qubit_ixz\nprobs = 0.3,0.2,0.5\nmu_points = 1\n",
            "channel = qubit_ixz\nprobs = 0.3,0.2,0.5\nmu_start = 0.6\nmu_end = 0.5\n",
            "channel = qubit_ixz\nprobs = 0.3,0.2,0.5\nbogus = 1\n",
            "channel = qubit_ixz\nchannel = qubit_ixz\nprobs = 0.3,0.2,0.5\n",
            "channel = qubit_ixz\nprobs = 0.3,0.2,0.5\nmode = fast\n",
            "channel = qubit_ixz\nprobs = 0.3,0.2,0.5\noutputs = csv,png\n",
            "channel = qubit_ixz\ndim = 3\nprobs = 0.3,0.2,0.5\n",
            "channel = qutrit\nprobs = 0.3,0.2,0.5\n",
            "dim = 3\nchannel = pauli_symmetric\nprobs = 0.3,0.3,0.3\n",
            "dim = 2\nchannel = pauli_general\nprobs = 0.5,0.5\n",
            "probs = 0.3,0.2,0.5\n",
            "channel = qubit_ixz\nprobs 0.3\n",
        ] {
            assert!(ExperimentConfig::parse(bad).is_err(), "accepted: {bad:?}");
        }
    }

    #[test]
    fn overrides_take_precedence() {
        let mut c = ExperimentConfig::parse("channel = qubit_ixz\nprobs = 0.3,0.2,0.5\nrestarts = 5\n").unwrap();
        let o = Overrides {
            mu_points: Some(11),
            seed: Some(7),
            mode: Some(SearchMode::RealAnsatz),
            no_svg: true,
            out: Some(PathBuf::from("/tmp/x")),
        };
        c.apply_overrides(&o).unwrap();
        assert_eq!(c.mu_points, 11);
        assert_eq!(c.optimizer.seed, 7);
        assert_eq!(c.optimizer.mode, SearchMode::RealAnsatz);
        assert_eq!(c.optimizer.restarts, 5);
        assert!(!c.outputs.svg && c.outputs.csv);
        assert_eq!(c.out_dir, PathBuf::from("/tmp/x"));
        assert!(c
            .apply_overrides(&Overrides {
                mu_points: Some(1),
                ..Default::default()
            })
            .is_err());
    }

    #[test]
    fn general_pauli_table() {
        let c = ExperimentConfig::parse("dim = 2\nchannel = pauli_general\nprobs = 0.7,0.1,0.1,0.1\n").unwrap();
        let spec = c.channel_spec().unwrap();
        assert_eq!(spec.base.len(), 4);
        assert!(spec.column.is_none());
    }
}
