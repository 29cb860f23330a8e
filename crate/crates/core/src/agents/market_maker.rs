use super::{positive_mean, AgentParams, AgentView, Quote};
use crate::matching::{MarketObservation, Side};
use crate::Price;

/// Two-sided quoting around the rolling mean price, leaning against
/// inventory imbalance.
///
/// Spread and shift are held in whole ticks.
#[derive(Debug, Clone)]
pub struct MarketMaker {
    prices: Vec<f64>,
    current: usize,
    pub target_inventory: i64,
    pub inventory_tolerance: i64,
    pub spread_ticks: i64,
    pub shift_ticks: i64,
    pub shares: i64,
}

impl MarketMaker {
    pub fn new(params: &AgentParams) -> Self {
        MarketMaker {
            prices: vec![0.0; params.mean_reversion_window.max(1)],
            current: 0,
            target_inventory: params.mm_target_inventory,
            inventory_tolerance: params.mm_inventory_tolerance,
            spread_ticks: Price::from_f64(params.mm_spread).ticks().max(1),
            shift_ticks: 0,
            shares: params.mm_shares,
        }
    }

    pub fn act(&mut self, obs: &MarketObservation, me: &AgentView) -> Vec<Quote> {
        self.prices[self.current] = obs.price.map_or(0.0, Price::to_f64);
        self.current = (self.current + 1) % self.prices.len();
        let Some(reference) = positive_mean(&self.prices) else {
            return Vec::new();
        };

        let divergence = me.shares - self.target_inventory;
        if divergence > self.inventory_tolerance {
            self.shift_ticks = (self.shift_ticks - 1).max(1);
            self.spread_ticks += 1;
        } else if divergence < -self.inventory_tolerance {
            self.shift_ticks += 1;
            self.spread_ticks += 1;
        } else {
            self.shift_ticks = 0;
            self.spread_ticks = (self.spread_ticks - 1).max(1);
        }

        let centre = Price::from_f64(reference);
        let bid = centre.offset(self.shift_ticks - self.spread_ticks).max(Price::ONE_TICK);
        let ask = centre.offset(self.shift_ticks + self.spread_ticks).max(Price::ONE_TICK);
        let bid_shares = (self.shares - divergence).max(10) as u64;
        let ask_shares = (self.shares + divergence).max(10) as u64;
        vec![
            Quote::limit(Side::Bid, bid_shares, bid),
            Quote::limit(Side::Ask, ask_shares, ask),
        ]
    }
}
