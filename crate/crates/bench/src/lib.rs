//! Shared inputs for the benchmarks.

use std::sync::Arc;

use evomarket_core::marginal::{Corpus, CorpusRow};
use evomarket_core::matching::AgentId;
use evomarket_core::seeding::{stream, Domain, SimRng};
use evomarket_core::{Order, OrderBook, OrderId, Price, Side};
use rand::Rng;

pub fn rng(seed: u64) -> SimRng {
    stream(seed, Domain::Analysis, seed)
}

/// A book holding `n` staged limit orders around 100.00.
pub fn staged_book(n: usize, rng: &mut SimRng) -> OrderBook {
    let mut book = OrderBook::new(Some(Price::from_ticks(10_000)));
    for i in 0..n {
        let side = if rng.random_bool(0.5) { Side::Bid } else { Side::Ask };
        let price = Price::from_ticks(rng.random_range(9_950..=10_050));
        let id = OrderId::new(AgentId(rng.random_range(0..60)), i as u64);
        book.submit(Order::limit(id, side, rng.random_range(1..=200), price, 0))
            .expect("valid order");
    }
    book
}

pub fn random_corpus(n: usize, rng: &mut SimRng) -> Arc<Corpus> {
    let rows = (0..n)
        .map(|_| CorpusRow {
            dx: rng.random_range(-20..=20) as f64 * 0.01,
            dvb: rng.random_range(-500.0..500.0),
            dva: rng.random_range(-500.0..500.0),
        })
        .collect();
    Arc::new(Corpus::from_rows(rows).expect("finite rows"))
}

/// A random walk of `n` prices starting at 100.
pub fn price_path(n: usize, rng: &mut SimRng) -> Vec<f64> {
    let mut x = 100.0;
    (0..n)
        .map(|_| {
            x += rng.random_range(-0.01..0.01);
            x
        })
        .collect()
}
