use std::sync::Arc;

use super::{conditional_expectation, Corpus, KnnIndex};
use crate::error::{Error, Result};
use crate::neural::{decode, forward, Genome, NetAction, NetInput, NetworkConfig};
use crate::Side;

/// Cash, position and mark-to-market profit of a standalone algorithm,
/// starting flat with zero cash.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Position {
    pub cash: f64,
    pub shares: i64,
    pub profit: f64,
}

impl Position {
    /// Revalues the position at `price`.
    pub fn mark(&mut self, price: f64) {
        self.profit = self.cash + self.shares as f64 * price;
    }

    /// Executes `action` as a market order filled entirely at `price`; the
    /// price offset of the action is ignored.
    pub fn fill(&mut self, action: &NetAction, price: f64) {
        if action.abstains() {
            return;
        }
        let signed = match action.side {
            Side::Bid => action.shares as i64,
            Side::Ask => -(action.shares as i64),
        };
        self.cash -= signed as f64 * price;
        self.shares += signed;
        self.mark(price);
    }
}

/// An evolved network driven by an observed price series alone.
///
/// The network sees the price delta, the corpus estimates of the two
/// interest deltas, and the deltas of its own position between calls.
#[derive(Debug, Clone)]
pub struct MarginalizedAlgo {
    genome: Arc<Genome>,
    corpus: Arc<Corpus>,
    index: Arc<KnnIndex>,
    k: usize,
    network: NetworkConfig,
    /// `(cash, shares, profit)` at the previous step.
    prev: Option<[f64; 3]>,
}

impl MarginalizedAlgo {
    pub fn new(
        genome: Arc<Genome>,
        corpus: Arc<Corpus>,
        index: Arc<KnnIndex>,
        k: usize,
        network: NetworkConfig,
    ) -> Result<Self> {
        if k == 0 {
            return Err(Error::config("k", "must be at least 1"));
        }
        if corpus.len() < k {
            return Err(Error::CorpusTooSmall {
                needed: k,
                available: corpus.len(),
            });
        }
        if index.len() != corpus.len() {
            return Err(Error::config("index", "was not built from this corpus"));
        }
        Ok(MarginalizedAlgo {
            genome,
            corpus,
            index,
            k,
            network,
            prev: None,
        })
    }

    pub fn genome(&self) -> &Arc<Genome> {
        &self.genome
    }

    /// Forgets the previous position for a fresh episode.
    pub fn reset(&mut self) {
        self.prev = None;
    }

    /// Asks the network for an action given the price change `dx` and the
    /// current (already marked) position. Only side and size of the action
    /// are meant to be used; the price offset has no counterpart outside the
    /// simulator.
    pub fn step(&mut self, dx: f64, position: &Position) -> Result<NetAction> {
        if !dx.is_finite() {
            return Err(Error::NonFinite("price change"));
        }
        let now = [position.cash, position.shares as f64, position.profit];
        let [d_cash, d_shares, d_profit] = match self.prev {
            Some(p) => [now[0] - p[0], now[1] - p[1], now[2] - p[2]],
            None => [0.0; 3],
        };
        self.prev = Some(now);

        let (d_interest_bid, d_interest_ask) = conditional_expectation(&self.index, &self.corpus, dx, self.k)?;
        let raw = NetInput {
            d_price: dx,
            d_interest_bid,
            d_interest_ask,
            d_cash,
            d_shares,
            d_profit,
        };
        let input = self.network.scales.normalize(raw);
        Ok(decode(forward(&self.genome, &input, self.network.activation)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::marginal::CorpusRow;

    fn algo(genome: Genome) -> MarginalizedAlgo {
        let corpus = Arc::new(
            Corpus::from_rows(
                (0..50)
                    .map(|i| CorpusRow {
                        dx: (i as f64 - 25.0) / 10.0,
                        dvb: i as f64,
                        dva: 50.0 - i as f64,
                    })
                    .collect(),
            )
            .unwrap(),
        );
        let index = Arc::new(KnnIndex::build(&corpus));
        MarginalizedAlgo::new(Arc::new(genome), corpus, index, 5, NetworkConfig::default()).unwrap()
    }

    #[test]
    fn zero_genome_abstains() {
        let mut a = algo(Genome::zeros());
        for t in 0..20 {
            let act = a.step((t as f64).sin(), &Position::default()).unwrap();
            assert_eq!(act.side, Side::Bid);
            assert!(act.abstains());
            assert_eq!(act.d_price_ticks, 0);
        }
    }

    #[test]
    fn fill_keeps_profit_and_marks_later() {
        let buy = NetAction {
            side: Side::Bid,
            shares: 100,
            d_price_ticks: 7,
        };
        let mut pos = Position::default();
        pos.fill(&buy, 100.0);
        assert_eq!(
            pos,
            Position {
                cash: -10_000.0,
                shares: 100,
                profit: 0.0
            }
        );
        pos.mark(101.0);
        assert_eq!(pos.profit, 100.0);
    }

    #[test]
    fn bias_only_network_ignores_position() {
        let mut g = Genome::zeros();
        g.output_bias_mut()[0] = 1.0;
        let mut a = algo(g.clone());
        let before = a.step(0.0, &Position::default()).unwrap();
        let after = a
            .step(
                0.0,
                &Position {
                    cash: -500.0,
                    shares: 5,
                    profit: 0.0,
                },
            )
            .unwrap();
        assert_eq!(before, after);
        a.reset();
        assert_eq!(a.step(0.0, &Position::default()).unwrap(), before);
    }

    #[test]
    fn k_larger_than_corpus_rejected() {
        let corpus = Arc::new(
            Corpus::from_rows(vec![CorpusRow {
                dx: 0.0,
                dvb: 0.0,
                dva: 0.0,
            }])
            .unwrap(),
        );
        let index = Arc::new(KnnIndex::build(&corpus));
        assert!(MarginalizedAlgo::new(Arc::new(Genome::zeros()), corpus, index, 2, NetworkConfig::default()).is_err());
    }
}
