use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context};
use evomarket_core::marginal::{generate_corpus, write_corpus};
use evomarket_core::neural::load_genomes;
use evomarket_core::Species;

use crate::config::RunConfig;
use crate::table::create;

pub const CORPUS_FILE: &str = "corpus.csv";
pub const RUNS_FILE: &str = "corpus_runs.csv";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusSummary {
    pub runs: usize,
    pub rows: usize,
}

/// Simulates selection-free markets and writes their `(dx, dvb, dva)` deltas
/// plus one provenance line per run. With `corpus.insert_genome` set, the
/// fittest genome of `genomes` trades in every run.
pub fn corpus(config: &RunConfig, genomes: Option<&Path>, out: &Path) -> anyhow::Result<CorpusSummary> {
    std::fs::create_dir_all(out).with_context(|| format!("{}", out.display()))?;
    config.write_manifest(out)?;

    let target = match (config.corpus.insert_genome, genomes) {
        (false, _) => None,
        (true, None) => bail!("invalid configuration: corpus.insert_genome: needs a genome file"),
        (true, Some(path)) => {
            let records = load_genomes(path)?;
            let best = records
                .into_iter()
                .reduce(|a, b| if b.fitness > a.fitness { b } else { a })
                .with_context(|| format!("{}: no genomes", path.display()))?;
            Some(Arc::new(best.genome))
        }
    };

    let corpus = generate_corpus(&config.corpus, &config.evolution.market, target.as_ref(), config.seed)?;
    let mut w = create(&out.join(CORPUS_FILE))?;
    write_corpus(&corpus, &mut w)?;
    w.flush()?;

    let mut w = create(&out.join(RUNS_FILE))?;
    let species: Vec<&str> = Species::ALL.iter().map(|s| s.code()).collect();
    writeln!(w, "run,seed,{},rows", species.join(","))?;
    for r in &corpus.runs {
        let counts: Vec<String> = Species::ALL.iter().map(|&s| r.spec.count(s).to_string()).collect();
        writeln!(w, "{},{},{},{}", r.run, r.seed, counts.join(","), r.rows)?;
    }
    w.flush()?;

    log::info!("corpus: {} rows from {} runs", corpus.len(), corpus.runs.len());
    Ok(CorpusSummary {
        runs: corpus.runs.len(),
        rows: corpus.len(),
    })
}
