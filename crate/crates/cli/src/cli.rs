use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use crate::commands;
use crate::config::RunConfig;

#[derive(Debug, Parser)]
#[command(
    name = "evomarket",
    version,
    about = "Evolve, marginalize and backtest market agents"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Default)]
pub struct Common {
    /// TOML run configuration; missing keys take defaults.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Master seed (overrides the config).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory (overrides the config).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads (overrides the config).
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the generational loop and store statistics and best genomes.
    Evolve {
        #[command(flatten)]
        common: Common,
    },
    /// Simulate selection-free markets and store the depth-delta corpus.
    Corpus {
        #[command(flatten)]
        common: Common,
        /// Genome file supplying the inserted agent.
        #[arg(long)]
        genomes: Option<PathBuf>,
    },
    /// Score genomes on monthly tick episodes through the marginalized network.
    Backtest {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        genomes: Option<PathBuf>,
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Directory of `PAIR-YYYY-MM.csv` tick files.
        #[arg(long)]
        ticks: Option<PathBuf>,
    },
    /// Build MSD, wealth, ECDF, KS and bootstrap tables from stored runs.
    Analyze {
        #[command(flatten)]
        common: Common,
        /// Output directory of an `evolve` run.
        #[arg(long)]
        evolution: Option<PathBuf>,
        /// Output directory of a `backtest` run.
        #[arg(long)]
        backtest: Option<PathBuf>,
    },
}

fn resolve(common: &Common) -> anyhow::Result<RunConfig> {
    let mut config = match &common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    if let Some(out) = &common.out {
        config.out = out.clone();
    }
    if common.jobs.is_some() {
        config.jobs = common.jobs;
    }
    config.evolution.seed = config.seed;
    config.validate()?;
    Ok(config)
}

fn pick(flag: &Option<PathBuf>, configured: &mut Option<PathBuf>, name: &str) -> anyhow::Result<PathBuf> {
    if let Some(p) = flag {
        *configured = Some(p.clone());
    }
    configured
        .clone()
        .with_context(|| format!("missing input: pass --{name} or set paths.{name}"))
}

fn in_pool<T: Send>(config: &RunConfig, f: impl FnOnce() -> anyhow::Result<T> + Send) -> anyhow::Result<T> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(config.threads()).build()?;
    pool.install(f)
}

/// Executes one subcommand and returns a one-line report.
pub fn run(command: &Command) -> anyhow::Result<String> {
    match command {
        Command::Evolve { common } => {
            let config = resolve(common)?;
            let out = config.out.clone();
            let s = in_pool(&config, || commands::evolve(&config, &out))?;
            Ok(format!(
                "evolve: {} simulations, {} generation records, {} genomes -> {}",
                s.simulations,
                s.generations,
                s.genomes,
                out.display()
            ))
        }
        Command::Corpus { common, genomes } => {
            let mut config = resolve(common)?;
            if let Some(g) = genomes {
                config.paths.genomes = Some(g.clone());
            }
            let out = config.out.clone();
            let genomes = config.paths.genomes.clone();
            let s = in_pool(&config, || commands::corpus(&config, genomes.as_deref(), &out))?;
            Ok(format!(
                "corpus: {} rows from {} runs -> {}",
                s.rows,
                s.runs,
                out.display()
            ))
        }
        Command::Backtest {
            common,
            genomes,
            corpus,
            ticks,
        } => {
            let mut config = resolve(common)?;
            let genomes = pick(genomes, &mut config.paths.genomes, "genomes")?;
            let corpus = pick(corpus, &mut config.paths.corpus, "corpus")?;
            let ticks = pick(ticks, &mut config.paths.ticks, "ticks")?;
            let out = config.out.clone();
            let s = in_pool(&config, || commands::backtest(&config, &genomes, &corpus, &ticks, &out))?;
            Ok(format!(
                "backtest: {} genomes, {} random, {} validation and {} test episodes, {} months missing -> {}",
                s.genomes,
                s.random_genomes,
                s.validation_episodes,
                s.test_episodes,
                s.missing_months,
                out.display()
            ))
        }
        Command::Analyze {
            common,
            evolution,
            backtest,
        } => {
            let mut config = resolve(common)?;
            if let Some(p) = evolution {
                config.paths.evolution = Some(p.clone());
            }
            if let Some(p) = backtest {
                config.paths.backtest = Some(p.clone());
            }
            let out = config.out.clone();
            let (ev, bt) = (config.paths.evolution.clone(), config.paths.backtest.clone());
            let s = in_pool(&config, || {
                commands::analyze(&config, ev.as_deref(), bt.as_deref(), &out)
            })?;
            Ok(format!(
                "analyze: {} MSD fits, {} cohorts -> {}",
                s.gamma.len(),
                s.cohorts.len(),
                out.display()
            ))
        }
    }
}

/// Convenience for tests: parse an argument vector and run it.
pub fn run_args<I, S>(args: I) -> anyhow::Result<String>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    run(&cli.command)
}
