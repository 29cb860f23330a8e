use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};
use std::path::Path;

use anyhow::Context;
use evomarket_core::analysis::{
    bootstrap_mean, ecdf, median, msd_exponent, prob_greater, wealth_summary, BootstrapMeans, Cohort, ProfitSample,
};
use evomarket_core::backtest::read_results;
use evomarket_core::seeding::{stream, Domain};
use evomarket_core::{GenerationRecord, Species};

use super::backtest::{ELITE_FILE, RANDOM_FILE, TEST_FILE};
use super::evolve::{PRICES_COLUMNS, PRICES_FILE, WEALTH_COLUMNS, WEALTH_FILE};
use crate::config::RunConfig;
use crate::table::{create, open, Table};

pub const GAMMA_FILE: &str = "gamma.csv";
pub const GAMMA_SUMMARY_FILE: &str = "gamma_summary.csv";
pub const WEALTH_SUMMARY_FILE: &str = "wealth.csv";
pub const KS_FILE: &str = "ks.csv";
pub const BOOTSTRAP_FILE: &str = "bootstrap.csv";
pub const BOOTSTRAP_PAIRS_FILE: &str = "bootstrap_pairs.csv";

pub fn ecdf_file(cohort: Cohort) -> String {
    format!("ecdf_{}.csv", cohort.tag())
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct AnalyzeSummary {
    /// `(sim, generation, γ)` for every fitted generation.
    pub gamma: Vec<(u32, u32, f64)>,
    pub cohorts: Vec<(Cohort, usize)>,
}

type SeriesBySim = BTreeMap<(u32, u32), BTreeMap<usize, Vec<f64>>>;

fn read_prices(path: &Path) -> anyhow::Result<SeriesBySim> {
    let t = Table::read(path, PRICES_COLUMNS)?;
    let mut out = SeriesBySim::new();
    for i in 0..t.len() {
        let key = (t.get(i, "sim")?, t.get(i, "generation")?);
        let market: usize = t.get(i, "market")?;
        out.entry(key)
            .or_default()
            .entry(market)
            .or_default()
            .push(t.get(i, "price")?);
    }
    Ok(out)
}

fn read_wealth(path: &Path) -> anyhow::Result<Vec<GenerationRecord>> {
    let t = Table::read(path, WEALTH_COLUMNS)?;
    let mut pooled: BTreeMap<(u32, u32), BTreeMap<Species, Vec<f64>>> = BTreeMap::new();
    for i in 0..t.len() {
        let key = (t.get(i, "sim")?, t.get(i, "generation")?);
        let species: Species = t.get(i, "species")?;
        pooled
            .entry(key)
            .or_default()
            .entry(species)
            .or_default()
            .push(t.get(i, "wealth")?);
    }
    Ok(pooled
        .into_iter()
        .map(|((_, generation), species_wealth)| GenerationRecord {
            generation,
            specs: Vec::new(),
            species_wealth,
            price_series: Vec::new(),
            nn_fitness: Vec::new(),
            best: None,
        })
        .collect())
}

fn analyze_evolution(dir: &Path, out: &Path, summary: &mut AnalyzeSummary) -> anyhow::Result<()> {
    let prices = dir.join(PRICES_FILE);
    if prices.exists() {
        let mut w = create(&out.join(GAMMA_FILE))?;
        writeln!(w, "sim,generation,gamma,intercept,r2,series")?;
        let mut by_generation: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
        for ((sim, generation), markets) in read_prices(&prices)? {
            let series: Vec<Vec<f64>> = markets.into_values().collect();
            match msd_exponent(&series, generation) {
                Ok(fit) => {
                    writeln!(
                        w,
                        "{sim},{generation},{},{},{},{}",
                        fit.exponent, fit.intercept, fit.r2, fit.series_count
                    )?;
                    by_generation.entry(generation).or_default().push(fit.exponent);
                    summary.gamma.push((sim, generation, fit.exponent));
                }
                Err(e) => log::warn!("sim {sim} generation {generation}: no MSD fit: {e}"),
            }
        }
        w.flush()?;
        let mut w = create(&out.join(GAMMA_SUMMARY_FILE))?;
        writeln!(w, "generation,median_gamma,sims")?;
        for (g, gammas) in &by_generation {
            writeln!(w, "{g},{},{}", median(gammas), gammas.len())?;
        }
        w.flush()?;
    } else {
        log::warn!("{} not found; skipping the MSD table", prices.display());
    }

    let wealth = dir.join(WEALTH_FILE);
    let mut w = create(&out.join(WEALTH_SUMMARY_FILE))?;
    writeln!(w, "generation,species,count,mean,median")?;
    for s in wealth_summary(&read_wealth(&wealth)?) {
        writeln!(w, "{},{},{},{},{}", s.generation, s.species, s.count, s.mean, s.median)?;
    }
    w.flush()?;
    Ok(())
}

fn read_elite(path: &Path) -> anyhow::Result<BTreeSet<String>> {
    let mut ids = BTreeSet::new();
    for line in open(path)?.lines() {
        let line = line.with_context(|| format!("{}", path.display()))?;
        if !line.trim().is_empty() {
            ids.insert(line.trim().to_string());
        }
    }
    Ok(ids)
}

fn cohort_samples(dir: &Path) -> anyhow::Result<Vec<ProfitSample>> {
    let load = |name: &str| -> anyhow::Result<_> {
        let path = dir.join(name);
        Ok(read_results(open(&path)?, &path)?)
    };
    let test = load(TEST_FILE)?;
    let random = load(RANDOM_FILE)?;
    let elite = read_elite(&dir.join(ELITE_FILE))?;

    let evolved: Vec<f64> = test.iter().map(|r| r.final_profit).collect();
    let elite: Vec<f64> = test
        .iter()
        .filter(|r| elite.contains(&r.genome_id))
        .map(|r| r.final_profit)
        .collect();
    let random: Vec<f64> = random.iter().map(|r| r.final_profit).collect();

    let mut samples = Vec::new();
    for (cohort, profits) in [
        (Cohort::Evolved, evolved),
        (Cohort::Elite, elite),
        (Cohort::Random, random),
    ] {
        if profits.is_empty() {
            log::warn!("cohort {cohort} has no episodes; left out of the comparisons");
            continue;
        }
        samples.push(ProfitSample::new(cohort, profits)?);
    }
    Ok(samples)
}

fn analyze_backtest(dir: &Path, out: &Path, config: &RunConfig, summary: &mut AnalyzeSummary) -> anyhow::Result<()> {
    let samples = cohort_samples(dir)?;
    for s in &samples {
        let mut w = create(&out.join(ecdf_file(s.cohort)))?;
        writeln!(w, "profit,cdf")?;
        for (x, f) in ecdf(&s.profits) {
            writeln!(w, "{x},{f}")?;
        }
        w.flush()?;
        summary.cohorts.push((s.cohort, s.episodes()));
    }

    let mut w = create(&out.join(KS_FILE))?;
    let tags: Vec<&str> = samples.iter().map(|s| s.cohort.tag()).collect();
    writeln!(w, "cohort,{}", tags.join(","))?;
    for a in &samples {
        let row = samples
            .iter()
            .map(|b| a.ks_distance(b).map(|d| d.to_string()))
            .collect::<evomarket_core::Result<Vec<_>>>()?;
        writeln!(w, "{},{}", a.cohort, row.join(","))?;
    }
    w.flush()?;

    let boots = samples
        .iter()
        .map(|s| {
            let mut rng = stream(config.seed, Domain::Analysis, s.cohort as u64);
            bootstrap_mean(&s.profits, config.analysis.n_boot, &mut rng)
        })
        .collect::<evomarket_core::Result<Vec<BootstrapMeans>>>()?;
    let mut w = create(&out.join(BOOTSTRAP_FILE))?;
    writeln!(w, "cohort,episodes,mean,p_positive")?;
    for (s, b) in samples.iter().zip(&boots) {
        let m = evomarket_core::analysis::mean(&s.profits);
        writeln!(w, "{},{},{m},{}", s.cohort, s.episodes(), b.p_positive)?;
    }
    w.flush()?;
    let mut w = create(&out.join(BOOTSTRAP_PAIRS_FILE))?;
    writeln!(w, "a,b,p_greater")?;
    for (i, a) in samples.iter().enumerate() {
        for (j, b) in samples.iter().enumerate() {
            if i != j {
                writeln!(w, "{},{},{}", a.cohort, b.cohort, prob_greater(&boots[i], &boots[j]))?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Builds the γ table and wealth summary from an evolve directory and the
/// cohort ECDFs, KS matrix and bootstrap summaries from a backtest directory.
pub fn analyze(
    config: &RunConfig,
    evolution: Option<&Path>,
    backtest: Option<&Path>,
    out: &Path,
) -> anyhow::Result<AnalyzeSummary> {
    if evolution.is_none() && backtest.is_none() {
        anyhow::bail!("nothing to analyze: give an evolution or a backtest directory");
    }
    std::fs::create_dir_all(out).with_context(|| format!("{}", out.display()))?;
    config.write_manifest(out)?;
    let mut summary = AnalyzeSummary::default();
    if let Some(dir) = evolution {
        analyze_evolution(dir, out, &mut summary)?;
    }
    if let Some(dir) = backtest {
        analyze_backtest(dir, out, config, &mut summary)?;
    }
    Ok(summary)
}
