//! Generational loop: draw market compositions, run the markets, pool the
//! neural agents, select and mutate, redistribute.
//!
//! Each generation's pooled population is shuffled and cut into disjoint
//! tournaments of `tournament_size`; leftovers that do not fill a tournament
//! pass through untouched. A tournament keeps one survivor, chosen by rank
//! with geometrically decaying probability, and refills itself with mutated
//! copies of that survivor.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::{index, SliceRandom};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::agents::Species;
use crate::error::{Error, Result};
pub use crate::market::MarketSpec;
use crate::market::{run_market, MarketConfig, MarketOutcome};
use crate::neural::{Genome, PARAM_COUNT};
use crate::seeding::{pair_index, stream, Domain};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mechanism {
    #[default]
    Tournament,
    /// No selection or mutation.
    Identity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvoConfig {
    pub generations: u32,
    pub markets: usize,
    pub tournament_size: usize,
    pub selection_prob: f64,
    pub mutation_scale: f64,
    pub nn_min: usize,
    pub nn_max: usize,
    pub agents_per_market: usize,
    /// Multinomial weights over the six static species, in
    /// [`Species::STATIC`] order.
    pub species_probs: [f64; 6],
    pub mechanism: Mechanism,
    pub seed: u64,
    pub market: MarketConfig,
}

impl Default for EvoConfig {
    fn default() -> Self {
        EvoConfig {
            generations: 100,
            markets: 24,
            tournament_size: 17,
            selection_prob: 0.5,
            mutation_scale: 0.1,
            nn_min: 2,
            nn_max: 10,
            agents_per_market: 60,
            species_probs: [1.0 / 6.0; 6],
            mechanism: Mechanism::Tournament,
            seed: 0,
            market: MarketConfig::default(),
        }
    }
}

impl EvoConfig {
    pub fn validate(&self) -> Result<()> {
        if self.tournament_size < 2 {
            return Err(Error::config("tournament_size", "must be at least 2"));
        }
        if !(self.selection_prob > 0.0 && self.selection_prob < 1.0) {
            return Err(Error::config("selection_prob", "must lie strictly between 0 and 1"));
        }
        if self.mutation_scale.is_nan() || self.mutation_scale < 0.0 {
            return Err(Error::config("mutation_scale", "must be nonnegative"));
        }
        if self.nn_min > self.nn_max {
            return Err(Error::config("nn_min", "must not exceed nn_max"));
        }
        if self.agents_per_market < self.nn_max {
            return Err(Error::config("agents_per_market", "must be at least nn_max"));
        }
        if self.markets == 0 {
            return Err(Error::config("markets", "must be at least 1"));
        }
        if self.species_probs.iter().any(|p| p.is_nan() || *p < 0.0) || self.species_probs.iter().sum::<f64>() <= 0.0 {
            return Err(Error::config("species_probs", "must be nonnegative with positive sum"));
        }
        self.market.validate()
    }
}

/// A genome together with the fitness it earned (or inherited).
#[derive(Debug, Clone, PartialEq)]
pub struct Scored {
    pub genome: Arc<Genome>,
    pub fitness: f64,
}

/// Draws a market composition: a uniform neural count in `[nn_min, nn_max]`,
/// the remaining agents multinomial over the static species.
pub fn draw_spec<R: Rng + ?Sized>(config: &EvoConfig, rng: &mut R) -> Result<MarketSpec> {
    if config.agents_per_market < config.nn_max {
        return Err(Error::config("agents_per_market", "must be at least nn_max"));
    }
    if config.nn_min > config.nn_max {
        return Err(Error::config("nn_min", "must not exceed nn_max"));
    }
    let neural = rng.random_range(config.nn_min..=config.nn_max);
    let mut spec = draw_static(config.agents_per_market - neural, &config.species_probs, rng)?;
    spec.counts[Species::Neural.index()] = neural;
    Ok(spec)
}

/// `n` static agents, multinomial with the given species weights.
pub fn draw_static<R: Rng + ?Sized>(n: usize, probs: &[f64; 6], rng: &mut R) -> Result<MarketSpec> {
    let dist = WeightedIndex::new(probs).map_err(|e| Error::config("species_probs", e.to_string()))?;
    let mut spec = MarketSpec::default();
    for _ in 0..n {
        spec.counts[Species::STATIC[dist.sample(rng)].index()] += 1;
    }
    Ok(spec)
}

/// Zero-based rank of the survivor: rank `i` wins with probability
/// `p(1-p)^i`; if no rank is picked, rank 0 wins.
pub fn pick_rank<R: Rng + ?Sized>(tournament_size: usize, p: f64, rng: &mut R) -> usize {
    (0..tournament_size).find(|_| rng.random::<f64>() < p).unwrap_or(0)
}

/// Adds independent `Normal(0, gamma² · variances[l])` noise to each
/// coordinate of `winner`.
pub fn mutate<R: Rng + ?Sized>(winner: &Genome, variances: &[f64], gamma: f64, rng: &mut R) -> Genome {
    let mut child = winner.clone();
    for (theta, var) in child.params_mut().iter_mut().zip(variances) {
        let z: f64 = rng.sample(StandardNormal);
        let sd = gamma * var.sqrt();
        if sd > 0.0 {
            *theta += sd * z;
        }
    }
    child
}

/// Per-coordinate population variance across `genomes`. Coordinates with
/// zero variance get 1, so mutation there falls back to `gamma²`.
pub fn pool_variances(genomes: &[&Genome]) -> Vec<f64> {
    let n = genomes.len() as f64;
    let mut var = vec![1.0; PARAM_COUNT];
    if genomes.is_empty() {
        return var;
    }
    for (l, v) in var.iter_mut().enumerate() {
        let mean = genomes.iter().map(|g| g.params()[l]).sum::<f64>() / n;
        let s = genomes.iter().map(|g| (g.params()[l] - mean).powi(2)).sum::<f64>() / n;
        if s > 0.0 {
            *v = s;
        }
    }
    var
}

/// One tournament over `pool`.
///
/// Samples `tournament_size` entrants without replacement, ranks them by
/// fitness (ties keep draw order) and returns the survivor followed by
/// `tournament_size - 1` mutants of it, each carrying the survivor's
/// fitness. A pool smaller than the tournament comes back unchanged.
pub fn tournament<R: Rng + ?Sized>(pool: &[Scored], variances: &[f64], config: &EvoConfig, rng: &mut R) -> Vec<Scored> {
    let tau = config.tournament_size;
    if pool.len() < tau {
        return pool.to_vec();
    }
    let mut entrants: Vec<&Scored> = index::sample(rng, pool.len(), tau)
        .into_iter()
        .map(|i| &pool[i])
        .collect();
    entrants.sort_by(|a, b| b.fitness.total_cmp(&a.fitness));
    let winner = entrants[pick_rank(tau, config.selection_prob, rng)].clone();

    let mut out = Vec::with_capacity(tau);
    for _ in 1..tau {
        let child = mutate(&winner.genome, variances, config.mutation_scale, rng);
        out.push(Scored {
            genome: Arc::new(child),
            fitness: winner.fitness,
        });
    }
    out.insert(0, winner);
    out
}

/// Applies the evolutionary mechanism to a pooled population.
pub fn evolve_pool<R: Rng + ?Sized>(mut pool: Vec<Scored>, config: &EvoConfig, rng: &mut R) -> Vec<Scored> {
    if config.mechanism == Mechanism::Identity {
        return pool;
    }
    let variances = {
        let genomes: Vec<&Genome> = pool.iter().map(|s| s.genome.as_ref()).collect();
        pool_variances(&genomes)
    };
    pool.shuffle(rng);
    let tau = config.tournament_size;
    let mut next = Vec::with_capacity(pool.len());
    for chunk in pool.chunks(tau) {
        if chunk.len() == tau {
            next.extend(tournament(chunk, &variances, config, rng));
        } else {
            next.extend_from_slice(chunk);
        }
    }
    next
}

/// Pads with fresh random genomes or drops the lowest-fitness members so the
/// population has exactly `target` members.
pub fn resize_population<R: Rng + ?Sized>(
    mut population: Vec<Scored>,
    target: usize,
    init_sigma: f64,
    rng: &mut R,
) -> Vec<Scored> {
    if population.len() > target {
        population.sort_by(|a, b| b.fitness.total_cmp(&a.fitness));
        population.truncate(target);
    }
    while population.len() < target {
        population.push(Scored {
            genome: Arc::new(Genome::random(init_sigma, rng)),
            fitness: f64::NEG_INFINITY,
        });
    }
    population
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpeciesStats {
    pub species: Species,
    pub count: usize,
    pub mean_wealth: f64,
    pub median_wealth: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerationRecord {
    pub generation: u32,
    pub specs: Vec<MarketSpec>,
    /// Final wealth of every agent of each species across all markets.
    pub species_wealth: BTreeMap<Species, Vec<f64>>,
    /// Price series of each market.
    pub price_series: Vec<Vec<f64>>,
    pub nn_fitness: Vec<f64>,
    pub best: Option<(Genome, f64)>,
}

impl GenerationRecord {
    /// Mean and median wealth per species present in this generation.
    pub fn species_stats(&self) -> Vec<SpeciesStats> {
        self.species_wealth
            .iter()
            .filter(|(_, w)| !w.is_empty())
            .map(|(&species, w)| SpeciesStats {
                species,
                count: w.len(),
                mean_wealth: crate::analysis::mean(w),
                median_wealth: crate::analysis::median(w),
            })
            .collect()
    }

    fn from_markets(generation: u32, specs: Vec<MarketSpec>, outcomes: &[MarketOutcome], pool: &[Scored]) -> Self {
        let mut species_wealth: BTreeMap<Species, Vec<f64>> = BTreeMap::new();
        for out in outcomes {
            for a in &out.agents {
                species_wealth.entry(a.species).or_default().push(a.final_wealth);
            }
        }
        let best = pool
            .iter()
            .fold(None::<&Scored>, |best, s| match best {
                Some(b) if b.fitness >= s.fitness => Some(b),
                _ => Some(s),
            })
            .map(|s| (s.genome.as_ref().clone(), s.fitness));
        GenerationRecord {
            generation,
            specs,
            species_wealth,
            price_series: outcomes.iter().map(MarketOutcome::price_series).collect(),
            nn_fitness: pool.iter().map(|s| s.fitness).collect(),
            best,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Evolution {
    pub records: Vec<GenerationRecord>,
    /// Population after the mechanism ran on the last generation.
    pub final_population: Vec<Scored>,
}

pub fn run_evolution(config: &EvoConfig) -> Result<Evolution> {
    run_evolution_from(config, Vec::new())
}

/// Runs `config.generations` generations starting from `initial` (padded
/// with random genomes as needed).
///
/// Markets within a generation run in parallel on the current rayon pool;
/// each draws from its own `(generation, market)` RNG stream so results are
/// independent of thread count.
pub fn run_evolution_from(config: &EvoConfig, initial: Vec<Genome>) -> Result<Evolution> {
    config.validate()?;
    let seed = config.seed;
    let sigma = config.market.network.init_sigma;
    let mut init_rng = stream(seed, Domain::Init, 0);
    let mut population: Vec<Scored> = initial
        .into_iter()
        .map(|g| Scored {
            genome: Arc::new(g),
            fitness: 0.0,
        })
        .collect();
    let mut records = Vec::with_capacity(config.generations as usize);

    for g in 0..config.generations {
        let mut spec_rng = stream(seed, Domain::Specs, g as u64);
        let specs = (0..config.markets)
            .map(|_| draw_spec(config, &mut spec_rng))
            .collect::<Result<Vec<_>>>()?;
        let needed: usize = specs.iter().map(MarketSpec::neural).sum();
        population = resize_population(population, needed, sigma, &mut init_rng);
        population.shuffle(&mut spec_rng);

        let mut assignments = Vec::with_capacity(specs.len());
        let mut offset = 0;
        for spec in &specs {
            let genomes: Vec<Arc<Genome>> = population[offset..offset + spec.neural()]
                .iter()
                .map(|s| Arc::clone(&s.genome))
                .collect();
            offset += spec.neural();
            assignments.push(genomes);
        }

        let outcomes = specs
            .par_iter()
            .zip(assignments.par_iter())
            .enumerate()
            .map(|(k, (spec, genomes))| {
                let mut rng = stream(seed, Domain::Market, pair_index(g as u64, k as u64));
                run_market(spec, genomes, &config.market, &mut rng)
            })
            .collect::<Result<Vec<_>>>()?;

        let pool: Vec<Scored> = outcomes
            .iter()
            .zip(&assignments)
            .flat_map(|(out, genomes)| {
                genomes.iter().zip(&out.fitnesses).map(|(genome, &fitness)| Scored {
                    genome: Arc::clone(genome),
                    fitness,
                })
            })
            .collect();

        records.push(GenerationRecord::from_markets(g, specs, &outcomes, &pool));
        log::debug!("generation {g}: {} neural agents", pool.len());

        let mut selection_rng = stream(seed, Domain::Selection, g as u64);
        population = evolve_pool(pool, config, &mut selection_rng);
    }

    Ok(Evolution {
        records,
        final_population: population,
    })
}
