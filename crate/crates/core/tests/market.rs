//! Whole-market properties.

use std::sync::Arc;

use evomarket_core::evolution::draw_spec;
use evomarket_core::market::run_market;
use evomarket_core::neural::init_random;
use evomarket_core::seeding::{stream, Domain};
use evomarket_core::{EvoConfig, Genome, Price};

#[test]
fn every_market_is_zero_sum() {
    let mut config = EvoConfig::default();
    config.market.timesteps = 150;
    let mut traded = 0;
    for k in 0..100u64 {
        let mut rng = stream(99, Domain::Market, k);
        let spec = draw_spec(&config, &mut rng).unwrap();
        let genomes: Vec<Arc<Genome>> = (0..spec.neural())
            .map(|_| Arc::new(init_random(&config.market.network, &mut rng)))
            .collect();
        let out = run_market(&spec, &genomes, &config.market, &mut rng).unwrap();
        let mark = out.prices.last().copied().flatten().map(Price::from_f64);
        assert_eq!(out.net_wealth_change_ticks(mark), 0, "market {k}");
        let net: f64 = out.agents.iter().map(|a| a.profit).sum();
        assert!(net.abs() <= 1e-6 * out.turnover.max(1.0), "market {k}: {net}");
        let shares: i64 = out.agents.iter().map(|a| a.ledger.shares()).sum();
        assert_eq!(shares, 0);
        traded += out.trade_count;
    }
    assert!(traded > 0);
}

#[test]
fn markets_are_reproducible_per_stream() {
    let config = EvoConfig::default();
    let run = |k| {
        let mut rng = stream(5, Domain::Market, k);
        let spec = draw_spec(&config, &mut rng).unwrap();
        let genomes: Vec<Arc<Genome>> = (0..spec.neural())
            .map(|_| Arc::new(init_random(&config.market.network, &mut rng)))
            .collect();
        run_market(&spec, &genomes, &config.market, &mut rng).unwrap()
    };
    assert_eq!(run(3), run(3));
    assert_ne!(run(3).prices, run(4).prices);
}
