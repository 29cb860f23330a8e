use rand::Rng;

use super::{draw_vol_pref, positive_mean, AgentParams, Quote, ShareDraw};
use crate::matching::{MarketObservation, Side};
use crate::Price;

/// Bets on a return to the rolling mean of recent prices.
///
/// Unfilled buffer slots hold zero and are left out of the mean. Note the ask
/// is priced *below* the current price and the bid above it.
#[derive(Debug, Clone)]
pub struct MeanReversion {
    prices: Vec<f64>,
    current: usize,
    pub price_tolerance: f64,
    pub vol_pref: f64,
    shares: ShareDraw,
}

impl MeanReversion {
    pub fn new(window: usize, price_tolerance: f64, vol_pref: f64, mean_order_size: f64) -> Self {
        assert!(window >= 1, "window must be at least 1");
        MeanReversion {
            prices: vec![0.0; window],
            current: 0,
            price_tolerance,
            vol_pref,
            shares: ShareDraw::new(mean_order_size),
        }
    }

    pub fn random<R: Rng + ?Sized>(params: &AgentParams, rng: &mut R) -> Self {
        let vol_pref = draw_vol_pref(params.vol_pref_scale, rng);
        MeanReversion::new(
            params.mean_reversion_window,
            params.mean_reversion_tolerance,
            vol_pref,
            params.mean_order_size,
        )
    }

    pub fn rolling_mean(&self) -> Option<f64> {
        positive_mean(&self.prices)
    }

    pub fn act<R: Rng + ?Sized>(&mut self, obs: &MarketObservation, rng: &mut R) -> Vec<Quote> {
        let p = obs.price.map(Price::to_f64);
        self.prices[self.current] = p.unwrap_or(0.0);
        self.current = (self.current + 1) % self.prices.len();

        let (Some(p), Some(mean)) = (p, self.rolling_mean()) else {
            return Vec::new();
        };
        let (side, price) = if p > mean + self.price_tolerance {
            (Side::Ask, p - self.vol_pref * rng.random::<f64>())
        } else if p < mean - self.price_tolerance {
            (Side::Bid, p + self.vol_pref * rng.random::<f64>())
        } else {
            return Vec::new();
        };
        let shares = self.shares.sample(rng);
        vec![Quote::limit(side, shares, Price::from_f64_floored(price))]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn obs(p: f64) -> MarketObservation {
        MarketObservation {
            price: Some(Price::from_f64(p)),
            ..Default::default()
        }
    }

    fn filled(window: usize, level: f64) -> (MeanReversion, ChaCha8Rng) {
        let mut mr = MeanReversion::new(window, 0.5, 0.0, 100.0);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..window {
            assert!(mr.act(&obs(level), &mut rng).is_empty());
        }
        (mr, rng)
    }

    #[test]
    fn above_mean_asks_at_price() {
        let (mut mr, mut rng) = filled(50, 100.0);
        let q = mr.act(&obs(101.0), &mut rng);
        assert_eq!(q[0].side, Side::Ask);
        assert_eq!(q[0].price, Some(Price::from_f64(101.0)));
    }

    #[test]
    fn below_mean_bids_at_price() {
        let (mut mr, mut rng) = filled(50, 100.0);
        let q = mr.act(&obs(99.0), &mut rng);
        assert_eq!(q[0].side, Side::Bid);
        assert_eq!(q[0].price, Some(Price::from_f64(99.0)));
    }

    #[test]
    fn empty_slots_ignored_in_mean() {
        let mut mr = MeanReversion::new(50, 0.5, 0.0, 100.0);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        mr.act(&obs(100.0), &mut rng);
        mr.act(&obs(102.0), &mut rng);
        assert_eq!(mr.rolling_mean(), Some(101.0));
    }

    #[test]
    fn buffer_wraps_around() {
        let (mut mr, mut rng) = filled(3, 100.0);
        for _ in 0..3 {
            mr.act(&obs(110.0), &mut rng);
        }
        assert_eq!(mr.rolling_mean(), Some(110.0));
    }
}
