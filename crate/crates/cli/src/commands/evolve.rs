use std::io::Write;
use std::path::Path;

use anyhow::Context;
use evomarket_core::evolution::run_evolution;
use evomarket_core::neural::{write_genomes, GenomeRecord};

use crate::config::RunConfig;
use crate::table::{create, write_header};

pub const GENERATIONS_FILE: &str = "generations.csv";
pub const WEALTH_FILE: &str = "wealth_final.csv";
pub const PRICES_FILE: &str = "prices.csv";
pub const GENOMES_FILE: &str = "best_genomes.txt";

pub const GENERATIONS_COLUMNS: &[&str] = &["sim", "generation", "species", "count", "mean_wealth", "median_wealth"];
pub const WEALTH_COLUMNS: &[&str] = &["sim", "generation", "species", "wealth"];
pub const PRICES_COLUMNS: &[&str] = &["sim", "generation", "market", "t", "price"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvolveSummary {
    pub simulations: u32,
    pub generations: usize,
    pub genomes: usize,
}

/// Runs `config.simulations` independent evolutions and writes per-generation
/// species statistics, every agent's final wealth, the market price series
/// and the best genome of each generation.
pub fn evolve(config: &RunConfig, out: &Path) -> anyhow::Result<EvolveSummary> {
    std::fs::create_dir_all(out).with_context(|| format!("{}", out.display()))?;
    config.write_manifest(out)?;

    let mut generations = create(&out.join(GENERATIONS_FILE))?;
    let mut wealth = create(&out.join(WEALTH_FILE))?;
    let mut prices = if config.write_prices {
        Some(create(&out.join(PRICES_FILE))?)
    } else {
        None
    };
    write_header(&mut generations, GENERATIONS_COLUMNS)?;
    write_header(&mut wealth, WEALTH_COLUMNS)?;
    if let Some(p) = prices.as_mut() {
        write_header(p, PRICES_COLUMNS)?;
    }

    let mut best = Vec::new();
    let mut n_records = 0;
    for sim in 0..config.simulations {
        let mut evo = config.evolution.clone();
        evo.seed = config.seed.wrapping_add(sim as u64);
        let run = run_evolution(&evo)?;
        log::info!("simulation {sim}: {} generations", run.records.len());
        for rec in &run.records {
            let g = rec.generation;
            for s in rec.species_stats() {
                writeln!(
                    generations,
                    "{sim},{g},{},{},{},{}",
                    s.species, s.count, s.mean_wealth, s.median_wealth
                )?;
            }
            for (species, ws) in &rec.species_wealth {
                for w in ws {
                    writeln!(wealth, "{sim},{g},{species},{w}")?;
                }
            }
            if let Some(p) = prices.as_mut() {
                for (m, series) in rec.price_series.iter().enumerate() {
                    for (t, x) in series.iter().enumerate() {
                        writeln!(p, "{sim},{g},{m},{t},{x}")?;
                    }
                }
            }
            if let Some((genome, fitness)) = &rec.best {
                best.push(GenomeRecord {
                    sim_id: sim,
                    generation: g,
                    fitness: *fitness,
                    genome: genome.clone(),
                });
            }
        }
        n_records += run.records.len();
    }
    generations.flush()?;
    wealth.flush()?;
    if let Some(mut p) = prices {
        p.flush()?;
    }
    let mut genomes = create(&out.join(GENOMES_FILE))?;
    write_genomes(&best, &mut genomes)?;
    genomes.flush()?;

    Ok(EvolveSummary {
        simulations: config.simulations,
        generations: n_records,
        genomes: best.len(),
    })
}
