use rand::Rng;

use super::{draw_vol_pref, AgentParams, Quote, ShareDraw};
use crate::matching::{MarketObservation, Side};
use crate::Price;

/// Random limit orders scattered uniformly within ±ν of the last price.
#[derive(Debug, Clone)]
pub struct ZeroIntelligence {
    pub vol_pref: f64,
    pub p_bid: f64,
    shares: ShareDraw,
}

impl ZeroIntelligence {
    pub fn new(vol_pref: f64, p_bid: f64, mean_order_size: f64) -> Self {
        ZeroIntelligence {
            vol_pref,
            p_bid,
            shares: ShareDraw::new(mean_order_size),
        }
    }

    pub fn random<R: Rng + ?Sized>(params: &AgentParams, rng: &mut R) -> Self {
        let vol_pref = draw_vol_pref(params.vol_pref_scale, rng);
        ZeroIntelligence::new(vol_pref, params.p_bid, params.mean_order_size)
    }

    pub fn act<R: Rng + ?Sized>(&self, obs: &MarketObservation, rng: &mut R) -> Vec<Quote> {
        let Some(last) = obs.price else {
            return Vec::new();
        };
        let side = draw_side(self.p_bid, rng);
        let shares = self.shares.sample(rng);
        let u: f64 = rng.random_range(-1.0..1.0);
        let price = Price::from_f64_floored(last.to_f64() + self.vol_pref * u);
        vec![Quote::limit(side, shares, price)]
    }
}

/// Zero intelligence with market orders instead of limit prices.
#[derive(Debug, Clone)]
pub struct ZeroIntelligencePriceless {
    pub p_bid: f64,
    shares: ShareDraw,
}

impl ZeroIntelligencePriceless {
    pub fn new(params: &AgentParams) -> Self {
        ZeroIntelligencePriceless {
            p_bid: params.p_bid,
            shares: ShareDraw::new(params.mean_order_size),
        }
    }

    pub fn act<R: Rng + ?Sized>(&self, obs: &MarketObservation, rng: &mut R) -> Vec<Quote> {
        if obs.price.is_none() {
            return Vec::new();
        }
        let side = draw_side(self.p_bid, rng);
        let shares = self.shares.sample(rng);
        vec![Quote::market(side, shares)]
    }
}

fn draw_side<R: Rng + ?Sized>(p_bid: f64, rng: &mut R) -> Side {
    if rng.random_bool(p_bid) {
        Side::Bid
    } else {
        Side::Ask
    }
}
