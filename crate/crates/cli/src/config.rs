//! Validated run configurations, echoed verbatim into every output record.

use std::path::PathBuf;

use levelstat_core::{DegeneracyPolicy, ScanGrid, SpinChainParams};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Default deletion fractions for the missing-level experiment.
pub const DEFAULT_FRACTIONS: [f64; 9] = [0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Source {
    Goe {
        blocks: usize,
        dim: usize,
        seed: u64,
        tridiagonal: bool,
    },
    Poisson {
        n: usize,
        blocks: usize,
        seed: u64,
    },
    SpinChain {
        params: SpinChainParams,
        /// Keep numerically coincident eigenvalues instead of collapsing them.
        keep_degenerate: bool,
    },
    CircleBilliard {
        n: usize,
        policy: DegeneracyPolicy,
    },
}

impl Source {
    pub fn name(&self) -> &'static str {
        match self {
            Source::Goe { .. } => "goe",
            Source::Poisson { .. } => "poisson",
            Source::SpinChain { .. } => "spin-chain",
            Source::CircleBilliard { .. } => "circle-billiard",
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Source::Goe { blocks, dim, .. } => {
                positive("blocks", blocks)?;
                if dim < 3 {
                    return config(format!("--dim must be at least 3, got {dim}"));
                }
            }
            Source::Poisson { n, blocks, .. } => {
                positive("blocks", blocks)?;
                if n < 3 {
                    return config(format!("--n must be at least 3, got {n}"));
                }
            }
            Source::SpinChain { params, .. } => {
                params.validate().map_err(|e| CliError::Config(e.to_string()))?;
                if params.sector_dim() < 3 {
                    return config(format!(
                        "sector L={} n_up={} has fewer than 3 states",
                        params.sites, params.n_up
                    ));
                }
            }
            Source::CircleBilliard { n, .. } => {
                if n < 3 {
                    return config(format!("--n must be at least 3, got {n}"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerateConfig {
    pub source: Source,
    pub outdir: PathBuf,
    /// File stem; defaults to the source kind.
    pub name: Option<String>,
}

impl GenerateConfig {
    pub fn stem(&self) -> String {
        self.name.clone().unwrap_or_else(|| self.source.name().to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeConfig {
    pub input: PathBuf,
    pub outdir: PathBuf,
    pub k_max: usize,
    pub grid: ScanGrid,
    pub bins: usize,
    /// Histogram upper edge; `None` picks 5 for `k <= 2` and 4 above.
    pub cut: Option<f64>,
}

impl AnalyzeConfig {
    pub fn new(input: impl Into<PathBuf>, outdir: impl Into<PathBuf>) -> Self {
        AnalyzeConfig {
            input: input.into(),
            outdir: outdir.into(),
            k_max: 8,
            grid: ScanGrid::default(),
            bins: 50,
            cut: None,
        }
    }

    pub fn cut_for(&self, k: usize) -> f64 {
        self.cut.unwrap_or(if k <= 2 { 5.0 } else { 4.0 })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MissingLevelsConfig {
    pub input: PathBuf,
    pub outdir: PathBuf,
    pub k: usize,
    pub grid: ScanGrid,
    pub fractions: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum RunConfig {
    Generate(GenerateConfig),
    Analyze(AnalyzeConfig),
    MissingLevels(MissingLevelsConfig),
}

fn config<T>(msg: String) -> Result<T> {
    Err(CliError::Config(msg))
}

fn positive(name: &str, v: usize) -> Result<()> {
    if v == 0 {
        return config(format!("--{name} must be at least 1"));
    }
    Ok(())
}

fn check_grid(g: &ScanGrid) -> Result<()> {
    g.validate().map_err(|e| CliError::Config(e.to_string()))
}

impl RunConfig {
    /// Checks every numeric field; nothing is computed before this passes.
    pub fn validate(&self) -> Result<()> {
        match self {
            RunConfig::Generate(g) => {
                g.source.validate()?;
                if let Some(name) = &g.name {
                    if name.is_empty() || name.contains(['/', '\\']) {
                        return config(format!("--name must be a plain file stem, got {name:?}"));
                    }
                }
            }
            RunConfig::Analyze(a) => {
                positive("k-max", a.k_max)?;
                check_grid(&a.grid)?;
                if a.bins < 2 {
                    return config(format!("--bins must be at least 2, got {}", a.bins));
                }
                if let Some(cut) = a.cut {
                    if !(cut > 0.0 && cut.is_finite()) {
                        return config(format!("--cut must be positive, got {cut}"));
                    }
                }
            }
            RunConfig::MissingLevels(m) => {
                positive("k", m.k)?;
                positive("trials", m.trials)?;
                check_grid(&m.grid)?;
                if m.fractions.is_empty() {
                    return config("--fractions must list at least one value".into());
                }
                if let Some(f) = m.fractions.iter().find(|f| !(0.0..1.0).contains(*f)) {
                    return config(format!("deletion fractions must lie in [0, 1), got {f}"));
                }
            }
        }
        Ok(())
    }
}
