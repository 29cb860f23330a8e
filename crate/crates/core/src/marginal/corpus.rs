use std::io::{BufRead, Write};
use std::path::Path;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::draw_static;
use crate::market::{run_market, MarketConfig, MarketSpec, ObservationPoint};
use crate::neural::Genome;
use crate::seeding::{self, Domain};
use crate::Species;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorpusRow {
    pub dx: f64,
    pub dvb: f64,
    pub dva: f64,
}

/// Provenance of one simulation that fed the corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusRun {
    pub run: usize,
    pub seed: u64,
    pub spec: MarketSpec,
    pub rows: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Corpus {
    pub rows: Vec<CorpusRow>,
    pub runs: Vec<CorpusRun>,
}

impl Corpus {
    pub fn from_rows(rows: Vec<CorpusRow>) -> Result<Self> {
        if rows
            .iter()
            .any(|r| !(r.dx.is_finite() && r.dvb.is_finite() && r.dva.is_finite()))
        {
            return Err(Error::NonFinite("corpus row"));
        }
        Ok(Corpus { rows, runs: Vec::new() })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorpusConfig {
    pub n_runs: usize,
    /// Neighbours averaged per query.
    pub k: usize,
    /// Add the genome being marginalized as one agent in every run.
    pub insert_genome: bool,
    pub agents_per_market: usize,
    pub species_probs: [f64; 6],
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            n_runs: 200,
            k: super::DEFAULT_K,
            insert_genome: false,
            agents_per_market: 60,
            species_probs: [1.0 / 6.0; 6],
        }
    }
}

impl CorpusConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_runs == 0 {
            return Err(Error::config("n_runs", "must be at least 1"));
        }
        if self.k == 0 {
            return Err(Error::config("k", "must be at least 1"));
        }
        if self.agents_per_market < 2 {
            return Err(Error::config("agents_per_market", "must be at least 2"));
        }
        Ok(())
    }
}

/// Consecutive-timestep deltas of an observation series; steps where either
/// end has no price are skipped.
pub fn corpus_rows(observations: &[ObservationPoint]) -> Vec<CorpusRow> {
    observations
        .windows(2)
        .filter_map(|w| {
            let (prev, now) = (&w[0], &w[1]);
            Some(CorpusRow {
                dx: now.price? - prev.price?,
                dvb: now.interest_bid as f64 - prev.interest_bid as f64,
                dva: now.interest_ask as f64 - prev.interest_ask as f64,
            })
        })
        .collect()
}

/// Runs `config.n_runs` independent markets without selection and collects
/// their deltas. Each run draws its static composition from
/// `config.species_probs`; with `target` set and `config.insert_genome`, that
/// genome trades as one extra neural agent in place of a static one.
pub fn generate_corpus(
    config: &CorpusConfig,
    market: &MarketConfig,
    target: Option<&Arc<Genome>>,
    seed: u64,
) -> Result<Corpus> {
    config.validate()?;
    market.validate()?;
    let genomes: Vec<Arc<Genome>> = match target {
        Some(g) if config.insert_genome => vec![Arc::clone(g)],
        _ => Vec::new(),
    };
    let runs: Vec<(Vec<CorpusRow>, CorpusRun)> = (0..config.n_runs)
        .into_par_iter()
        .map(|run| {
            let mut rng = seeding::stream(seed, Domain::Corpus, run as u64);
            let n_static = config.agents_per_market - genomes.len();
            let spec = draw_static(n_static, &config.species_probs, &mut rng)?.with(Species::Neural, genomes.len());
            let outcome = run_market(&spec, &genomes, market, &mut rng)?;
            let rows = corpus_rows(&outcome.observations);
            let info = CorpusRun {
                run,
                seed,
                spec,
                rows: rows.len(),
            };
            Ok((rows, info))
        })
        .collect::<Result<_>>()?;

    let mut corpus = Corpus::default();
    for (rows, info) in runs {
        corpus.rows.extend(rows);
        corpus.runs.push(info);
    }
    Ok(corpus)
}

pub fn write_corpus<W: Write>(corpus: &Corpus, mut out: W) -> std::io::Result<()> {
    writeln!(out, "dx,dvb,dva")?;
    for r in &corpus.rows {
        writeln!(out, "{},{},{}", r.dx, r.dvb, r.dva)?;
    }
    Ok(())
}

pub fn read_corpus<R: BufRead>(input: R, path: &Path) -> Result<Corpus> {
    let parse_err = |line: usize, reason: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        reason,
    };
    let mut lines = input.lines().enumerate();
    match lines.next() {
        Some((_, Ok(h))) if h.trim() == "dx,dvb,dva" => {}
        Some((_, Ok(h))) => {
            return Err(parse_err(
                1,
                format!("expected header `dx,dvb,dva`, found `{}`", h.trim()),
            ))
        }
        Some((_, Err(e))) => return Err(Error::io(path, e)),
        None => return Err(parse_err(1, "missing header".into())),
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let mut v = [0.0; 3];
        let fields: Vec<&str> = line.trim().split(',').collect();
        if fields.len() != 3 {
            return Err(parse_err(i + 1, format!("expected 3 fields, found {}", fields.len())));
        }
        for (slot, (field, name)) in v.iter_mut().zip(fields.iter().zip(["dx", "dvb", "dva"])) {
            let x: f64 = field.parse().map_err(|e| parse_err(i + 1, format!("{name}: {e}")))?;
            if !x.is_finite() {
                return Err(parse_err(i + 1, format!("{name}: non-finite value")));
            }
            *slot = x;
        }
        rows.push(CorpusRow {
            dx: v[0],
            dvb: v[1],
            dva: v[2],
        });
    }
    Ok(Corpus { rows, runs: Vec::new() })
}

pub fn load_corpus(path: &Path) -> Result<Corpus> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_corpus(std::io::BufReader::new(file), path)
}
