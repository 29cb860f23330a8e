//! Trader species and their books of account.
//!
//! Each static species is a small state machine that turns the current
//! [`MarketObservation`] (plus, for market makers, its own inventory) into
//! zero, one or two [`Quote`]s per timestep. Prices are snapped to the tick
//! grid and never go below one tick.

mod fundamental;
mod ledger;
mod market_maker;
mod mean_reversion;
mod momentum;
mod zero_intelligence;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Exp, Poisson};
use serde::{Deserialize, Serialize};

pub use fundamental::FundamentalValue;
pub use ledger::{AgentView, Ledger};
pub use market_maker::MarketMaker;
pub use mean_reversion::MeanReversion;
pub use momentum::Momentum;
pub use zero_intelligence::{ZeroIntelligence, ZeroIntelligencePriceless};

use crate::matching::{MarketObservation, Side};
use crate::neural::NeuralTrader;
use crate::Price;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Species {
    ZeroIntelligence,
    ZeroIntelligencePriceless,
    Momentum,
    MeanReversion,
    MarketMaker,
    FundamentalValue,
    Neural,
}

impl Species {
    pub const ALL: [Species; 7] = [
        Species::ZeroIntelligence,
        Species::ZeroIntelligencePriceless,
        Species::Momentum,
        Species::MeanReversion,
        Species::MarketMaker,
        Species::FundamentalValue,
        Species::Neural,
    ];

    /// The six species that never evolve.
    pub const STATIC: [Species; 6] = [
        Species::ZeroIntelligence,
        Species::ZeroIntelligencePriceless,
        Species::Momentum,
        Species::MeanReversion,
        Species::MarketMaker,
        Species::FundamentalValue,
    ];

    pub fn code(self) -> &'static str {
        match self {
            Species::ZeroIntelligence => "ZI",
            Species::ZeroIntelligencePriceless => "ZIP",
            Species::Momentum => "MO",
            Species::MeanReversion => "MR",
            Species::MarketMaker => "MM",
            Species::FundamentalValue => "FV",
            Species::Neural => "NN",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Species {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Species {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Species::ALL
            .into_iter()
            .find(|sp| sp.code() == s)
            .ok_or_else(|| format!("unknown species `{s}`"))
    }
}

/// An order intention before the market stamps owner, id and time on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Quote {
    pub side: Side,
    pub shares: u64,
    pub price: Option<Price>,
    pub time_in_force: u64,
}

impl Quote {
    pub fn limit(side: Side, shares: u64, price: Price) -> Self {
        Quote {
            side,
            shares,
            price: Some(price),
            time_in_force: 0,
        }
    }

    pub fn market(side: Side, shares: u64) -> Self {
        Quote {
            side,
            shares,
            price: None,
            time_in_force: 0,
        }
    }
}

/// Static species parameters. Unset fields take the documented defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AgentParams {
    /// Mean of the Poisson share-count draw.
    pub mean_order_size: f64,
    /// Scale (mean) of the exponential micro-volatility preference ν.
    pub vol_pref_scale: f64,
    pub p_bid: f64,
    pub momentum_dx: f64,
    pub fundamental_dx: f64,
    /// Fundamental valuations are drawn uniformly within ± this of the
    /// initial price.
    pub fundamental_spread: f64,
    pub fundamental_tolerance: f64,
    pub mean_reversion_window: usize,
    pub mean_reversion_tolerance: f64,
    pub mm_target_inventory: i64,
    pub mm_inventory_tolerance: i64,
    pub mm_spread: f64,
    pub mm_shares: i64,
}

impl Default for AgentParams {
    fn default() -> Self {
        AgentParams {
            mean_order_size: 100.0,
            vol_pref_scale: 10.0,
            p_bid: 0.5,
            momentum_dx: 0.05,
            fundamental_dx: 0.05,
            fundamental_spread: 5.0,
            fundamental_tolerance: 1.0,
            mean_reversion_window: 50,
            mean_reversion_tolerance: 0.5,
            mm_target_inventory: 0,
            mm_inventory_tolerance: 50,
            mm_spread: 0.05,
            mm_shares: 100,
        }
    }
}

/// Poisson share counts, clamped to at least one share.
#[derive(Debug, Clone, Copy)]
pub struct ShareDraw(Poisson<f64>);

impl ShareDraw {
    pub fn new(mean: f64) -> Self {
        ShareDraw(Poisson::new(mean).expect("mean order size must be positive"))
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        (self.0.sample(rng) as u64).max(1)
    }
}

pub(crate) fn draw_vol_pref<R: Rng + ?Sized>(scale: f64, rng: &mut R) -> f64 {
    if scale <= 0.0 {
        return 0.0;
    }
    Exp::new(1.0 / scale).expect("positive rate").sample(rng)
}

/// Mean of the positive entries of a rolling price buffer.
pub(crate) fn positive_mean(prices: &[f64]) -> Option<f64> {
    let (sum, n) = prices
        .iter()
        .filter(|&&p| p > 0.0)
        .fold((0.0, 0usize), |(s, n), &p| (s + p, n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// A trading agent of any species.
#[derive(Debug, Clone)]
pub enum Strategy {
    ZeroIntelligence(ZeroIntelligence),
    ZeroIntelligencePriceless(ZeroIntelligencePriceless),
    Momentum(Momentum),
    MeanReversion(MeanReversion),
    MarketMaker(MarketMaker),
    FundamentalValue(FundamentalValue),
    Neural(NeuralTrader),
}

impl Strategy {
    /// A freshly drawn static agent. Panics for [`Species::Neural`], which
    /// needs a genome.
    pub fn new_static<R: Rng + ?Sized>(
        species: Species,
        params: &AgentParams,
        initial_price: f64,
        rng: &mut R,
    ) -> Self {
        match species {
            Species::ZeroIntelligence => Strategy::ZeroIntelligence(ZeroIntelligence::random(params, rng)),
            Species::ZeroIntelligencePriceless => {
                Strategy::ZeroIntelligencePriceless(ZeroIntelligencePriceless::new(params))
            }
            Species::Momentum => Strategy::Momentum(Momentum::new(params)),
            Species::MeanReversion => Strategy::MeanReversion(MeanReversion::random(params, rng)),
            Species::MarketMaker => Strategy::MarketMaker(MarketMaker::new(params)),
            Species::FundamentalValue => {
                Strategy::FundamentalValue(FundamentalValue::random(params, initial_price, rng))
            }
            Species::Neural => panic!("neural agents are built from a genome"),
        }
    }

    pub fn species(&self) -> Species {
        match self {
            Strategy::ZeroIntelligence(_) => Species::ZeroIntelligence,
            Strategy::ZeroIntelligencePriceless(_) => Species::ZeroIntelligencePriceless,
            Strategy::Momentum(_) => Species::Momentum,
            Strategy::MeanReversion(_) => Species::MeanReversion,
            Strategy::MarketMaker(_) => Species::MarketMaker,
            Strategy::FundamentalValue(_) => Species::FundamentalValue,
            Strategy::Neural(_) => Species::Neural,
        }
    }

    pub fn act<R: Rng + ?Sized>(&mut self, obs: &MarketObservation, me: &AgentView, rng: &mut R) -> Vec<Quote> {
        match self {
            Strategy::ZeroIntelligence(a) => a.act(obs, rng),
            Strategy::ZeroIntelligencePriceless(a) => a.act(obs, rng),
            Strategy::Momentum(a) => a.act(obs, rng),
            Strategy::MeanReversion(a) => a.act(obs, rng),
            Strategy::MarketMaker(a) => a.act(obs, me),
            Strategy::FundamentalValue(a) => a.act(obs, rng),
            Strategy::Neural(a) => a.act(obs, me),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn species_codes_round_trip() {
        for sp in Species::ALL {
            assert_eq!(sp.code().parse::<Species>().unwrap(), sp);
        }
        assert!("HFT".parse::<Species>().is_err());
    }

    #[test]
    fn positive_mean_skips_empty_slots() {
        assert_eq!(positive_mean(&[0.0, 100.0, 0.0, 102.0]), Some(101.0));
        assert_eq!(positive_mean(&[0.0; 4]), None);
    }
}
