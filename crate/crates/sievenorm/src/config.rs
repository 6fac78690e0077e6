//! Suite configuration: an optional `[settings]` table followed by repeated
//! `[[experiment]]` blocks, each naming one experiment and its parameters.
//!
//! ```toml
//! [settings]
//! rel_tol = 1e-4
//! floor = 0.1
//!
//! [[experiment]]
//! name = "kernel_gap"
//! n = [1024, 4096]
//! kinds = ["gstar", "h"]
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};
use sievenorm_core::KernelKind;
use thiserror::Error;

use crate::experiments::Settings;

/// The suite run by `sievenorm suite` without `--config`.
pub const DEFAULT_CONFIG: &str = include_str!("default_suite.toml");

/// Every experiment name a block may use.
pub const EXPERIMENTS: [&str; 15] = [
    "ramanujan_oracle",
    "epsilon_orthogonality",
    "parseval",
    "kernel_duality",
    "kernel_gap",
    "annihilation",
    "squarefree_theorem",
    "autocorrelation",
    "prime_support",
    "vaughan",
    "lambda_l1",
    "weighted_prime_sum",
    "prime_count",
    "squarefree_density",
    "large_sieve",
];

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("unknown experiment {0:?}")]
    UnknownExperiment(String),
    #[error("experiment {experiment:?}: unknown kernel kind {kind:?}")]
    UnknownKind { experiment: String, kind: String },
    #[error("experiment {0:?}: needs at least one N in `n`")]
    MissingN(String),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub settings: Settings,
    pub experiment: Vec<ExperimentBlock>,
}

/// Parameters of one experiment block; each experiment reads the fields it
/// needs and falls back to its own defaults for the rest.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentBlock {
    pub name: String,
    /// The N ladder.
    pub n: Vec<usize>,
    /// Kernel kinds, for the kernel experiments.
    pub kinds: Vec<String>,
    pub p: Option<usize>,
    pub q: Option<usize>,
    /// Grid size as a multiple of N.
    pub grid_factor: Option<usize>,
    pub seed: Option<u64>,
    /// Extra seeds for random inputs.
    pub seeds: Vec<u64>,
    pub trials: Option<usize>,
    /// Sample points per row (random α).
    pub points: Option<usize>,
    pub upto: Option<usize>,
    pub q_max: Option<usize>,
    pub n_range: Option<i64>,
    pub max_param: Option<u64>,
    pub max_square_param: Option<u64>,
    pub max_n: Option<usize>,
}

const NEEDS_N: [&str; 9] = [
    "kernel_duality",
    "kernel_gap",
    "annihilation",
    "squarefree_theorem",
    "autocorrelation",
    "prime_support",
    "vaughan",
    "lambda_l1",
    "weighted_prime_sum",
];

impl ExperimentBlock {
    pub fn kernel_kinds(&self, default: &[KernelKind]) -> Result<Vec<KernelKind>, ConfigError> {
        if self.kinds.is_empty() {
            return Ok(default.to_vec());
        }
        self.kinds
            .iter()
            .map(|k| {
                KernelKind::from_name(k).ok_or_else(|| ConfigError::UnknownKind {
                    experiment: self.name.clone(),
                    kind: k.clone(),
                })
            })
            .collect()
    }
}

impl SuiteConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let cfg: SuiteConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn default_suite() -> Self {
        Self::parse(DEFAULT_CONFIG).expect("embedded default config is valid")
    }

    fn validate(&self) -> Result<(), ConfigError> {
        for b in &self.experiment {
            if !EXPERIMENTS.contains(&b.name.as_str()) {
                return Err(ConfigError::UnknownExperiment(b.name.clone()));
            }
            if NEEDS_N.contains(&b.name.as_str()) && b.n.is_empty() {
                return Err(ConfigError::MissingN(b.name.clone()));
            }
            b.kernel_kinds(&[])?;
        }
        Ok(())
    }

    /// The blocks whose name is in `names`, in config order.
    pub fn select(&self, names: &[String]) -> Self {
        Self {
            settings: self.settings,
            experiment: self
                .experiment
                .iter()
                .filter(|b| names.iter().any(|n| n == &b.name))
                .cloned()
                .collect(),
        }
    }
}
