use rand::Rng;

use super::{draw_vol_pref, AgentParams, Quote, ShareDraw};
use crate::matching::{MarketObservation, Side};
use crate::Price;

/// Trades toward a fixed private valuation once the price leaves its
/// tolerance band.
#[derive(Debug, Clone)]
pub struct FundamentalValue {
    pub mean_price: f64,
    pub price_tolerance: f64,
    pub dx: f64,
    pub vol_pref: f64,
    shares: ShareDraw,
}

impl FundamentalValue {
    pub fn new(mean_price: f64, price_tolerance: f64, dx: f64, vol_pref: f64, mean_order_size: f64) -> Self {
        FundamentalValue {
            mean_price,
            price_tolerance,
            dx,
            vol_pref,
            shares: ShareDraw::new(mean_order_size),
        }
    }

    pub fn random<R: Rng + ?Sized>(params: &AgentParams, initial_price: f64, rng: &mut R) -> Self {
        let spread = params.fundamental_spread;
        let mean_price = if spread > 0.0 {
            initial_price + rng.random_range(-spread..spread)
        } else {
            initial_price
        };
        let vol_pref = draw_vol_pref(params.vol_pref_scale, rng);
        FundamentalValue::new(
            mean_price,
            params.fundamental_tolerance,
            params.fundamental_dx,
            vol_pref,
            params.mean_order_size,
        )
    }

    pub fn act<R: Rng + ?Sized>(&self, obs: &MarketObservation, rng: &mut R) -> Vec<Quote> {
        let Some(p) = obs.price.map(Price::to_f64) else {
            return Vec::new();
        };
        let (side, base) = if p > self.mean_price + self.price_tolerance {
            (Side::Ask, p + self.dx)
        } else if p < self.mean_price - self.price_tolerance {
            (Side::Bid, p - self.dx)
        } else {
            return Vec::new();
        };
        let noise = self.vol_pref * rng.random::<f64>() - self.vol_pref / 2.0;
        let shares = self.shares.sample(rng);
        vec![Quote::limit(side, shares, Price::from_f64_floored(base + noise))]
    }
}
