use rand::Rng;

use super::{AgentParams, Quote, ShareDraw};
use crate::matching::{MarketObservation, Side};
use crate::Price;

/// Trend follower: buys after a rise, sells after a fall.
///
/// The first observed price is only recorded.
#[derive(Debug, Clone)]
pub struct Momentum {
    dx_ticks: i64,
    last: Option<Price>,
    shares: ShareDraw,
}

impl Momentum {
    pub fn new(params: &AgentParams) -> Self {
        Momentum {
            dx_ticks: Price::from_f64(params.momentum_dx).ticks(),
            last: None,
            shares: ShareDraw::new(params.mean_order_size),
        }
    }

    pub fn act<R: Rng + ?Sized>(&mut self, obs: &MarketObservation, rng: &mut R) -> Vec<Quote> {
        let Some(p) = obs.price else {
            return Vec::new();
        };
        let Some(last) = self.last.replace(p) else {
            return Vec::new();
        };
        let dp = last.ticks() - p.ticks();
        let (side, price) = if dp > 0 {
            (Side::Ask, p.offset(self.dx_ticks))
        } else if dp < 0 {
            (Side::Bid, p.offset(-self.dx_ticks))
        } else if rng.random_bool(0.5) {
            (Side::Ask, p)
        } else {
            (Side::Bid, p)
        };
        let shares = self.shares.sample(rng);
        vec![Quote::limit(side, shares, price.max(Price::ONE_TICK))]
    }
}
