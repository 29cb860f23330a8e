use std::collections::{BTreeMap, VecDeque};

use super::clearing::clearing_price;
use super::order::{Order, OrderId, Side, Trade};
use crate::error::Result;
use crate::Price;

/// Resting orders older than this many timesteps are purged (one trading day).
pub const DEFAULT_MAX_AGE: u64 = 100;

/// What agents can see of the market at a timestep: the last clearing price
/// and the resting depth on each side. Staged orders are not visible.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MarketObservation {
    pub price: Option<Price>,
    pub depth_bid: BTreeMap<Price, u64>,
    pub depth_ask: BTreeMap<Price, u64>,
    pub interest_bid: u64,
    pub interest_ask: u64,
}

type Levels = BTreeMap<Price, VecDeque<Order>>;

#[derive(Debug, Clone, Default)]
pub struct OrderBook {
    bids: Levels,
    asks: Levels,
    staged: Vec<Order>,
    last_price: Option<Price>,
}

impl OrderBook {
    pub fn new(last_price: Option<Price>) -> Self {
        OrderBook {
            last_price,
            ..Default::default()
        }
    }

    pub fn last_price(&self) -> Option<Price> {
        self.last_price
    }

    /// Stages an order for the next batch.
    pub fn submit(&mut self, order: Order) -> Result<()> {
        order.validate()?;
        self.staged.push(order);
        Ok(())
    }

    pub fn staged(&self) -> &[Order] {
        &self.staged
    }

    pub fn resting(&self, side: Side) -> impl Iterator<Item = &Order> + '_ {
        let levels = match side {
            Side::Bid => &self.bids,
            Side::Ask => &self.asks,
        };
        levels.values().flat_map(|q| q.iter())
    }

    pub fn resting_count(&self) -> usize {
        self.bids.values().chain(self.asks.values()).map(VecDeque::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bids.is_empty() && self.asks.is_empty()
    }

    /// Runs the auction for timestep `t`.
    ///
    /// Staged limit orders join the book, the clearing price is discovered and
    /// crossing orders fill in priority order: market orders, then better
    /// price, then older submit time, then order id. Unfilled limit residuals
    /// rest with their original submit time; market residuals are dropped.
    /// Returns `(None, [])` when nothing crosses.
    pub fn run_batch(&mut self, t: u64) -> (Option<Price>, Vec<Trade>) {
        let mut market_bids = Vec::new();
        let mut market_asks = Vec::new();
        for order in std::mem::take(&mut self.staged) {
            match (order.price, order.side) {
                (None, Side::Bid) => market_bids.push(order),
                (None, Side::Ask) => market_asks.push(order),
                (Some(p), Side::Bid) => insert_by_age(self.bids.entry(p).or_default(), order),
                (Some(p), Side::Ask) => insert_by_age(self.asks.entry(p).or_default(), order),
            }
        }
        market_bids.sort_by(Order::time_priority);
        market_asks.sort_by(Order::time_priority);

        let bid_levels = level_totals(&self.bids);
        let ask_levels = level_totals(&self.asks);
        let market_bid: u64 = market_bids.iter().map(|o| o.shares).sum();
        let market_ask: u64 = market_asks.iter().map(|o| o.shares).sum();

        let Some(outcome) = clearing_price(&bid_levels, &ask_levels, market_bid, market_ask, self.last_price) else {
            return (None, Vec::new());
        };
        let price = outcome.price;

        let mut buy_fills = fill_market(&mut market_bids, outcome.volume);
        let left = outcome.volume - fills_total(&buy_fills);
        buy_fills.extend(fill_levels(&mut self.bids, Side::Bid, price, left));

        let mut sell_fills = fill_market(&mut market_asks, outcome.volume);
        let left = outcome.volume - fills_total(&sell_fills);
        sell_fills.extend(fill_levels(&mut self.asks, Side::Ask, price, left));

        debug_assert_eq!(fills_total(&buy_fills), outcome.volume);
        debug_assert_eq!(fills_total(&sell_fills), outcome.volume);

        let trades = pair_fills(&buy_fills, &sell_fills, price, t);
        self.last_price = Some(price);
        (Some(price), trades)
    }

    /// Removes resting orders whose age `t - submit_time` has reached their
    /// lifetime: `max_age`, or a shorter positive `time_in_force`.
    pub fn purge_stale(&mut self, t: u64, max_age: u64) -> usize {
        let stale = |o: &Order| {
            let lifetime = match o.time_in_force {
                0 => max_age,
                tif => tif.min(max_age),
            };
            t.saturating_sub(o.submit_time) >= lifetime
        };
        let mut purged = 0;
        for levels in [&mut self.bids, &mut self.asks] {
            levels.retain(|_, queue| {
                let before = queue.len();
                queue.retain(|o| !stale(o));
                purged += before - queue.len();
                !queue.is_empty()
            });
        }
        purged
    }

    /// Drops every resting order; the last price survives.
    pub fn end_of_day_clear(&mut self) {
        self.bids.clear();
        self.asks.clear();
    }

    pub fn observe(&self) -> MarketObservation {
        let depth_bid: BTreeMap<Price, u64> = level_totals(&self.bids).into_iter().collect();
        let depth_ask: BTreeMap<Price, u64> = level_totals(&self.asks).into_iter().collect();
        MarketObservation {
            price: self.last_price,
            interest_bid: depth_bid.values().sum(),
            interest_ask: depth_ask.values().sum(),
            depth_bid,
            depth_ask,
        }
    }

    /// `(price, interest_bid, interest_ask)` without materialising depth maps.
    pub fn interests(&self) -> (Option<Price>, u64, u64) {
        let total = |levels: &Levels| levels.values().flatten().map(|o| o.shares).sum();
        (self.last_price, total(&self.bids), total(&self.asks))
    }
}

fn insert_by_age(queue: &mut VecDeque<Order>, order: Order) {
    let at = queue.partition_point(|o| o.time_priority(&order).is_lt());
    queue.insert(at, order);
}

fn level_totals(levels: &Levels) -> Vec<(Price, u64)> {
    levels
        .iter()
        .map(|(p, q)| (*p, q.iter().map(|o| o.shares).sum()))
        .collect()
}

fn fills_total(fills: &[(OrderId, u64)]) -> u64 {
    fills.iter().map(|&(_, n)| n).sum()
}

fn fill_market(orders: &mut [Order], volume: u64) -> Vec<(OrderId, u64)> {
    let mut left = volume;
    let mut fills = Vec::new();
    for order in orders {
        if left == 0 {
            break;
        }
        let n = order.shares.min(left);
        order.shares -= n;
        left -= n;
        fills.push((order.id, n));
    }
    fills
}

/// Fills up to `volume` shares from the levels that cross `price`, best level
/// first. Fully filled orders and emptied levels are removed.
fn fill_levels(levels: &mut Levels, side: Side, price: Price, volume: u64) -> Vec<(OrderId, u64)> {
    let mut fills = Vec::new();
    if volume == 0 {
        return fills;
    }
    let mut left = volume;
    let mut emptied = Vec::new();
    let crossing: Box<dyn Iterator<Item = (&Price, &mut VecDeque<Order>)>> = match side {
        Side::Bid => Box::new(levels.range_mut(price..).rev()),
        Side::Ask => Box::new(levels.range_mut(..=price)),
    };
    for (level, queue) in crossing {
        while left > 0 {
            let Some(front) = queue.front_mut() else { break };
            let n = front.shares.min(left);
            front.shares -= n;
            left -= n;
            fills.push((front.id, n));
            if front.shares == 0 {
                queue.pop_front();
            }
        }
        if queue.is_empty() {
            emptied.push(*level);
        }
        if left == 0 {
            break;
        }
    }
    for level in emptied {
        levels.remove(&level);
    }
    fills
}

fn pair_fills(buys: &[(OrderId, u64)], sells: &[(OrderId, u64)], price: Price, t: u64) -> Vec<Trade> {
    let mut trades = Vec::new();
    let (mut i, mut j) = (0, 0);
    let (mut buy_left, mut sell_left) = (buys.first().map_or(0, |f| f.1), sells.first().map_or(0, |f| f.1));
    while i < buys.len() && j < sells.len() {
        let n = buy_left.min(sell_left);
        trades.push(Trade {
            buy_order_id: buys[i].0,
            sell_order_id: sells[j].0,
            shares: n,
            price,
            timestep: t,
        });
        buy_left -= n;
        sell_left -= n;
        if buy_left == 0 {
            i += 1;
            buy_left = buys.get(i).map_or(0, |f| f.1);
        }
        if sell_left == 0 {
            j += 1;
            sell_left = sells.get(j).map_or(0, |f| f.1);
        }
    }
    trades
}
