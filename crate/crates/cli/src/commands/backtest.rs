use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::Context;
use evomarket_core::backtest::{
    build_episode, load_ticks, run_episode, select_elite, write_results, EpisodeSeries, ResultRow, RiskConfig,
    YearMonth,
};
use evomarket_core::marginal::{load_corpus, Corpus, KnnIndex, MarginalizedAlgo};
use evomarket_core::neural::{init_random, load_genomes, NetworkConfig};
use evomarket_core::seeding::{stream, Domain};
use evomarket_core::{Error, Genome};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::table::create;

pub const VALIDATION_FILE: &str = "results_validation.csv";
pub const TEST_FILE: &str = "results_test.csv";
pub const RANDOM_FILE: &str = "results_random.csv";
pub const ELITE_FILE: &str = "elite.txt";
pub const SUMMARY_FILE: &str = "summary.txt";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BacktestSummary {
    pub genomes: usize,
    pub random_genomes: usize,
    pub validation_episodes: usize,
    pub test_episodes: usize,
    /// Month files that were absent or held no quotes for their pair.
    pub missing_months: usize,
    pub elite: Vec<String>,
}

/// `DIR/EURUSD-2016-01.csv` for pair `EUR/USD`, month 2016-01.
pub fn tick_file(dir: &Path, pair: &str, month: YearMonth) -> PathBuf {
    dir.join(format!("{}-{month}.csv", pair.replace('/', "")))
}

/// Loads one episode per available `(pair, month)`, counting the misses.
pub fn load_episodes(
    dir: &Path,
    pairs: &[String],
    months: &[YearMonth],
) -> anyhow::Result<(Vec<EpisodeSeries>, usize)> {
    let mut episodes = Vec::new();
    let mut missing = 0;
    for pair in pairs {
        for &month in months {
            let path = tick_file(dir, pair, month);
            if !path.exists() {
                log::warn!("skipping {pair} {month}: {} not found", path.display());
                missing += 1;
                continue;
            }
            let ticks = load_ticks(&path)?;
            if ticks.rejected > 0 {
                log::warn!("{}: {} malformed lines skipped", path.display(), ticks.rejected);
            }
            match build_episode(&ticks.records, month, pair) {
                Ok(ep) => {
                    log::info!("{pair} {month}: {} steps, scale {}", ep.prices.len(), ep.scale);
                    episodes.push(ep);
                }
                Err(Error::EmptyMonth { .. }) => {
                    log::warn!("skipping {pair} {month}: no quotes in {}", path.display());
                    missing += 1;
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok((episodes, missing))
}

struct Scorer<'a> {
    corpus: Arc<Corpus>,
    index: Arc<KnnIndex>,
    k: usize,
    network: NetworkConfig,
    risk: &'a RiskConfig,
}

impl Scorer<'_> {
    /// Every genome on every episode, rows ordered by genome then episode.
    fn score(&self, genomes: &[(String, Arc<Genome>)], episodes: &[EpisodeSeries]) -> anyhow::Result<Vec<ResultRow>> {
        let per_genome = genomes
            .par_iter()
            .map(|(id, genome)| {
                let mut algo = MarginalizedAlgo::new(
                    Arc::clone(genome),
                    Arc::clone(&self.corpus),
                    Arc::clone(&self.index),
                    self.k,
                    self.network,
                )?;
                episodes
                    .iter()
                    .map(|ep| run_episode(&mut algo, id, ep, self.risk).map(|r| ResultRow::from(&r)))
                    .collect::<evomarket_core::Result<Vec<_>>>()
            })
            .collect::<evomarket_core::Result<Vec<_>>>()?;
        Ok(per_genome.into_iter().flatten().collect())
    }
}

fn write_rows(path: &Path, rows: &[ResultRow]) -> anyhow::Result<()> {
    let mut w = create(path)?;
    write_results(rows, &mut w)?;
    w.flush()?;
    Ok(())
}

/// Scores the evolved genomes on the validation months, picks the elite by
/// total validation profit, then scores evolved and random genomes on the
/// test months.
pub fn backtest(
    config: &RunConfig,
    genome_file: &Path,
    corpus_file: &Path,
    tick_dir: &Path,
    out: &Path,
) -> anyhow::Result<BacktestSummary> {
    std::fs::create_dir_all(out).with_context(|| format!("{}", out.display()))?;
    config.write_manifest(out)?;
    let bt = &config.backtest;

    let genomes: Vec<(String, Arc<Genome>)> = load_genomes(genome_file)?
        .into_iter()
        .filter(|r| r.generation >= bt.min_generation)
        .map(|r| (r.id(), Arc::new(r.genome)))
        .collect();
    let network = config.evolution.market.network;
    let random: Vec<(String, Arc<Genome>)> = (0..bt.random_genomes)
        .map(|i| {
            let mut rng = stream(config.seed, Domain::Backtest, i as u64);
            (format!("random-{i}"), Arc::new(init_random(&network, &mut rng)))
        })
        .collect();

    let corpus = Arc::new(load_corpus(corpus_file)?);
    let index = Arc::new(KnnIndex::build(&corpus));
    let scorer = Scorer {
        corpus,
        index,
        k: config.corpus.k,
        network,
        risk: &config.risk,
    };

    let (validation, missing_v) = load_episodes(tick_dir, &bt.pairs, &bt.validation.months())?;
    let (test, missing_t) = load_episodes(tick_dir, &bt.pairs, &bt.test.months())?;

    let validation_rows = scorer.score(&genomes, &validation)?;
    write_rows(&out.join(VALIDATION_FILE), &validation_rows)?;
    let elite = select_elite(&validation_rows, bt.elite_k);
    let mut w = create(&out.join(ELITE_FILE))?;
    for id in &elite {
        writeln!(w, "{id}")?;
    }
    w.flush()?;

    write_rows(&out.join(TEST_FILE), &scorer.score(&genomes, &test)?)?;
    write_rows(&out.join(RANDOM_FILE), &scorer.score(&random, &test)?)?;

    let summary = BacktestSummary {
        genomes: genomes.len(),
        random_genomes: random.len(),
        validation_episodes: validation.len(),
        test_episodes: test.len(),
        missing_months: missing_v + missing_t,
        elite,
    };
    let mut w = create(&out.join(SUMMARY_FILE))?;
    writeln!(w, "genomes {}", summary.genomes)?;
    writeln!(w, "random_genomes {}", summary.random_genomes)?;
    writeln!(w, "validation_episodes {}", summary.validation_episodes)?;
    writeln!(w, "test_episodes {}", summary.test_episodes)?;
    writeln!(w, "missing_months {}", summary.missing_months)?;
    w.flush()?;
    if summary.missing_months > 0 {
        log::warn!("{} month files missing or empty", summary.missing_months);
    }
    Ok(summary)
}
