//! Run configuration: one TOML document covering every stage of the
//! pipeline. Missing keys take their defaults, so an empty file is valid.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use evomarket_core::backtest::{RiskConfig, YearMonth};
use evomarket_core::marginal::CorpusConfig;
use evomarket_core::EvoConfig;
use serde::{Deserialize, Serialize};

pub const MANIFEST: &str = "manifest.toml";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Master seed. Simulation `i` of an evolve run uses `seed + i`.
    pub seed: u64,
    pub out: PathBuf,
    /// Worker threads; unset means hardware parallelism capped at the
    /// number of markets per generation.
    pub jobs: Option<usize>,
    /// Independent evolution runs.
    pub simulations: u32,
    /// Write every market's price series (needed for the γ table).
    pub write_prices: bool,
    pub evolution: EvoConfig,
    pub corpus: CorpusConfig,
    pub risk: RiskConfig,
    pub backtest: BacktestConfig,
    pub analysis: AnalysisConfig,
    pub paths: DataPaths,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            out: PathBuf::from("out"),
            jobs: None,
            simulations: 1,
            write_prices: true,
            evolution: EvoConfig::default(),
            corpus: CorpusConfig::default(),
            risk: RiskConfig::default(),
            backtest: BacktestConfig::default(),
            analysis: AnalysisConfig::default(),
            paths: DataPaths::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Split {
    pub first: YearMonth,
    pub last: YearMonth,
}

impl Split {
    pub fn months(&self) -> Vec<YearMonth> {
        self.first.through(self.last)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BacktestConfig {
    pub pairs: Vec<String>,
    /// Months used to rank genomes and pick the elite.
    pub validation: Split,
    /// Held-out months every cohort is scored on.
    pub test: Split,
    pub elite_k: usize,
    /// Untrained networks backtested as the baseline cohort.
    pub random_genomes: usize,
    /// Genomes from earlier generations are ignored.
    pub min_generation: u32,
}

impl Default for BacktestConfig {
    fn default() -> Self {
        let ym = |y, m| YearMonth::new(y, m).expect("valid month");
        BacktestConfig {
            pairs: vec!["EUR/USD".into()],
            validation: Split {
                first: ym(2010, 1),
                last: ym(2014, 12),
            },
            test: Split {
                first: ym(2015, 1),
                last: ym(2019, 7),
            },
            elite_k: 10,
            random_genomes: 100,
            min_generation: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisConfig {
    pub n_boot: usize,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            n_boot: evomarket_core::analysis::DEFAULT_BOOTSTRAP_SAMPLES,
        }
    }
}

/// Input locations. Command-line flags take precedence.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DataPaths {
    pub genomes: Option<PathBuf>,
    pub corpus: Option<PathBuf>,
    pub ticks: Option<PathBuf>,
    pub evolution: Option<PathBuf>,
    pub backtest: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("{}", path.display()))?;
        Self::parse(&text).with_context(|| format!("{}", path.display()))
    }

    pub fn parse(text: &str) -> anyhow::Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always serializable")
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        self.evolution.validate()?;
        self.corpus.validate()?;
        self.risk.validate()?;
        if self.simulations == 0 {
            bail!("invalid configuration: simulations: must be at least 1");
        }
        if self.jobs == Some(0) {
            bail!("invalid configuration: jobs: must be at least 1");
        }
        if self.backtest.pairs.is_empty() {
            bail!("invalid configuration: backtest.pairs: must name at least one pair");
        }
        if self.backtest.validation.first > self.backtest.validation.last {
            bail!("invalid configuration: backtest.validation: first month is after last");
        }
        if self.backtest.test.first > self.backtest.test.last {
            bail!("invalid configuration: backtest.test: first month is after last");
        }
        Ok(())
    }

    /// Thread count actually used.
    pub fn threads(&self) -> usize {
        self.jobs.unwrap_or_else(|| {
            let hw = std::thread::available_parallelism().map_or(1, |n| n.get());
            hw.min(self.evolution.markets.max(1))
        })
    }

    /// Writes the resolved configuration to `dir/manifest.toml`.
    pub fn write_manifest(&self, dir: &Path) -> anyhow::Result<()> {
        let path = dir.join(MANIFEST);
        std::fs::write(&path, self.to_toml()).with_context(|| format!("{}", path.display()))
    }
}
