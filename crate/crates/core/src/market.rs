//! One simulated market: a population of agents trading against a batch
//! auction for a fixed number of timesteps.
//!
//! Each timestep every agent sees the same observation (last price and
//! resting depth), submits its quotes, the batch runs and trades settle.
//! Stale orders are purged after every batch and the book is wiped at the end
//! of each trading day.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::agents::{AgentParams, Ledger, Species, Strategy};
use crate::error::{Error, Result};
use crate::matching::{AgentId, Order, OrderBook, OrderId, DEFAULT_MAX_AGE};
use crate::neural::{Genome, NetworkConfig, NeuralTrader};
use crate::Price;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MarketConfig {
    pub timesteps: u64,
    pub steps_per_day: u64,
    pub max_age: u64,
    /// Price before the first trade; `None` starts with no reference price.
    pub initial_price: Option<f64>,
    pub initial_cash: f64,
    pub agents: AgentParams,
    pub network: NetworkConfig,
    /// Keep a per-agent wealth row for every timestep.
    pub record_wealth_series: bool,
}

impl Default for MarketConfig {
    fn default() -> Self {
        MarketConfig {
            timesteps: 500,
            steps_per_day: 100,
            max_age: DEFAULT_MAX_AGE,
            initial_price: Some(100.0),
            initial_cash: 10_000.0,
            agents: AgentParams::default(),
            network: NetworkConfig::default(),
            record_wealth_series: false,
        }
    }
}

impl MarketConfig {
    pub fn validate(&self) -> Result<()> {
        if self.timesteps == 0 {
            return Err(Error::config("timesteps", "must be at least 1"));
        }
        if self.steps_per_day == 0 {
            return Err(Error::config("steps_per_day", "must be at least 1"));
        }
        if self.max_age == 0 {
            return Err(Error::config("max_age", "must be at least 1"));
        }
        if matches!(self.initial_price, Some(p) if p.is_nan() || p <= 0.0) {
            return Err(Error::config("initial_price", "must be positive"));
        }
        if self.agents.mean_reversion_window == 0 {
            return Err(Error::config("mean_reversion_window", "must be at least 1"));
        }
        if self.agents.mean_order_size.is_nan() || self.agents.mean_order_size <= 0.0 {
            return Err(Error::config("mean_order_size", "must be positive"));
        }
        if !(0.0..=1.0).contains(&self.agents.p_bid) {
            return Err(Error::config("p_bid", "must be a probability"));
        }
        Ok(())
    }
}

/// Agent counts per species, indexed by [`Species::index`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MarketSpec {
    pub counts: [usize; 7],
}

impl MarketSpec {
    pub fn count(&self, species: Species) -> usize {
        self.counts[species.index()]
    }

    pub fn neural(&self) -> usize {
        self.count(Species::Neural)
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn with(mut self, species: Species, n: usize) -> Self {
        self.counts[species.index()] = n;
        self
    }
}

/// What agents observed at the start of a timestep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservationPoint {
    pub price: Option<f64>,
    pub interest_bid: u64,
    pub interest_ask: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AgentOutcome {
    pub id: AgentId,
    pub species: Species,
    /// Position in the input genome list for neural agents.
    pub genome_index: Option<usize>,
    pub ledger: Ledger,
    pub final_wealth: f64,
    pub profit: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WealthRow {
    pub timestep: u64,
    pub agent_id: AgentId,
    pub species: Species,
    pub cash: f64,
    pub shares: i64,
    pub profit: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarketOutcome {
    /// Final mark-to-market profit of each neural agent, in genome order.
    pub fitnesses: Vec<f64>,
    /// Last price after each batch, `X_0..X_{T-1}`.
    pub prices: Vec<Option<f64>>,
    /// Observation at the start of each timestep.
    pub observations: Vec<ObservationPoint>,
    pub agents: Vec<AgentOutcome>,
    pub wealth_series: Vec<WealthRow>,
    pub trade_count: usize,
    /// Total shares × price exchanged, in price units.
    pub turnover: f64,
}

impl MarketOutcome {
    /// Final price series with missing prices skipped.
    pub fn price_series(&self) -> Vec<f64> {
        self.prices.iter().flatten().copied().collect()
    }

    /// Sum over agents of final minus initial wealth, in ticks.
    pub fn net_wealth_change_ticks(&self, mark: Option<Price>) -> i64 {
        self.agents.iter().map(|a| a.ledger.profit_ticks(mark)).sum()
    }
}

struct Agent {
    id: AgentId,
    strategy: Strategy,
    ledger: Ledger,
    genome_index: Option<usize>,
    next_seq: u64,
}

/// Simulates one market for `config.timesteps` batches.
///
/// `genomes` must contain exactly `spec.neural()` entries. Agent ids are
/// assigned after a shuffle so no species systematically wins same-price,
/// same-time ties.
pub fn run_market<R: Rng + ?Sized>(
    spec: &MarketSpec,
    genomes: &[Arc<Genome>],
    config: &MarketConfig,
    rng: &mut R,
) -> Result<MarketOutcome> {
    config.validate()?;
    if genomes.len() != spec.neural() {
        return Err(Error::config(
            "genomes",
            format!(
                "spec has {} neural agents but {} genomes were given",
                spec.neural(),
                genomes.len()
            ),
        ));
    }
    let initial_price = config.initial_price.unwrap_or(100.0);

    let mut strategies: Vec<(Strategy, Option<usize>)> = Vec::with_capacity(spec.total());
    for species in Species::STATIC {
        for _ in 0..spec.count(species) {
            strategies.push((Strategy::new_static(species, &config.agents, initial_price, rng), None));
        }
    }
    for (i, genome) in genomes.iter().enumerate() {
        let trader = NeuralTrader::new(Arc::clone(genome), config.network);
        strategies.push((Strategy::Neural(trader), Some(i)));
    }
    strategies.shuffle(rng);

    let mut agents: Vec<Agent> = strategies
        .into_iter()
        .enumerate()
        .map(|(i, (strategy, genome_index))| Agent {
            id: AgentId(i as u32),
            strategy,
            ledger: Ledger::new(config.initial_cash),
            genome_index,
            next_seq: 0,
        })
        .collect();

    let mut book = OrderBook::new(config.initial_price.map(Price::from_f64));
    let t_max = config.timesteps;
    let mut prices = Vec::with_capacity(t_max as usize);
    let mut observations = Vec::with_capacity(t_max as usize);
    let mut wealth_series = Vec::new();
    let mut trade_count = 0;
    let mut turnover_ticks: i64 = 0;

    for t in 0..t_max {
        let obs = book.observe();
        observations.push(ObservationPoint {
            price: obs.price.map(Price::to_f64),
            interest_bid: obs.interest_bid,
            interest_ask: obs.interest_ask,
        });

        for agent in agents.iter_mut() {
            let view = agent.ledger.view(obs.price);
            for quote in agent.strategy.act(&obs, &view, rng) {
                let order = Order {
                    id: OrderId::new(agent.id, agent.next_seq),
                    side: quote.side,
                    shares: quote.shares,
                    price: quote.price,
                    submit_time: t,
                    time_in_force: quote.time_in_force,
                };
                agent.next_seq += 1;
                book.submit(order)?;
            }
        }

        let (_, trades) = book.run_batch(t);
        for trade in &trades {
            agents[trade.buyer().0 as usize].ledger.buy(trade.shares, trade.price);
            agents[trade.seller().0 as usize].ledger.sell(trade.shares, trade.price);
            turnover_ticks += trade.notional_ticks();
        }
        trade_count += trades.len();
        prices.push(book.last_price().map(Price::to_f64));

        book.purge_stale(t, config.max_age);
        if (t + 1) % config.steps_per_day == 0 {
            book.end_of_day_clear();
        }

        if config.record_wealth_series {
            let mark = book.last_price();
            wealth_series.extend(agents.iter().map(|a| WealthRow {
                timestep: t,
                agent_id: a.id,
                species: a.strategy.species(),
                cash: a.ledger.cash(),
                shares: a.ledger.shares(),
                profit: a.ledger.profit(mark),
            }));
        }
    }

    let mark = book.last_price();
    let mut fitnesses = vec![0.0; genomes.len()];
    let outcomes: Vec<AgentOutcome> = agents
        .into_iter()
        .map(|a| {
            let profit = a.ledger.profit(mark);
            if let Some(i) = a.genome_index {
                fitnesses[i] = profit;
            }
            AgentOutcome {
                id: a.id,
                species: a.strategy.species(),
                genome_index: a.genome_index,
                final_wealth: a.ledger.wealth(mark),
                ledger: a.ledger,
                profit,
            }
        })
        .collect();

    Ok(MarketOutcome {
        fitnesses,
        prices,
        observations,
        agents: outcomes,
        wealth_series,
        trade_count,
        turnover: turnover_ticks as f64 / crate::TICKS_PER_UNIT as f64,
    })
}
