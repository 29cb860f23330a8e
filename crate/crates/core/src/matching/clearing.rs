use crate::Price;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClearingOutcome {
    pub price: Price,
    /// Shares that execute on each side at `price`.
    pub volume: u64,
}

/// Uniform-price clearing rule for one batch.
///
/// `bids` and `asks` are limit levels `(price, shares)` in any order; market
/// orders contribute `market_bid`/`market_ask` shares at every price.
///
/// Among prices between the lowest and highest limit price the rule picks the
/// ones maximising executable volume `min(demand, supply)`, then minimising
/// `|demand - supply|`. The optimal prices form a contiguous tick range
/// `[lo, hi]`; the result is `last_price` if it lies in that range, otherwise
/// the midpoint rounded half up to a tick. With no limit orders at all, market
/// orders cross at `last_price`.
///
/// Returns `None` when nothing can execute.
pub fn clearing_price(
    bids: &[(Price, u64)],
    asks: &[(Price, u64)],
    market_bid: u64,
    market_ask: u64,
    last_price: Option<Price>,
) -> Option<ClearingOutcome> {
    if bids.is_empty() && asks.is_empty() {
        let volume = market_bid.min(market_ask);
        return match last_price {
            Some(price) if volume > 0 => Some(ClearingOutcome { price, volume }),
            _ => None,
        };
    }

    let mut bid_levels = bids.to_vec();
    let mut ask_levels = asks.to_vec();
    bid_levels.sort_unstable_by_key(|&(p, _)| p);
    ask_levels.sort_unstable_by_key(|&(p, _)| p);

    // suffix sums for demand (bids at or above p), prefix sums for supply
    let mut bid_suffix = vec![0u64; bid_levels.len() + 1];
    for i in (0..bid_levels.len()).rev() {
        bid_suffix[i] = bid_suffix[i + 1] + bid_levels[i].1;
    }
    let mut ask_prefix = vec![0u64; ask_levels.len() + 1];
    for i in 0..ask_levels.len() {
        ask_prefix[i + 1] = ask_prefix[i] + ask_levels[i].1;
    }
    let demand = |p: Price| {
        let first = bid_levels.partition_point(|&(b, _)| b < p);
        market_bid + bid_suffix[first]
    };
    let supply = |p: Price| {
        let end = ask_levels.partition_point(|&(a, _)| a <= p);
        market_ask + ask_prefix[end]
    };

    let lowest = bid_levels
        .first()
        .into_iter()
        .chain(ask_levels.first())
        .map(|&(p, _)| p)
        .min()?;
    let highest = bid_levels
        .last()
        .into_iter()
        .chain(ask_levels.last())
        .map(|&(p, _)| p)
        .max()?;

    // demand only changes just above a bid price, supply only at an ask price
    let mut candidates: Vec<Price> = Vec::with_capacity(2 * (bid_levels.len() + ask_levels.len()));
    for &(b, _) in &bid_levels {
        candidates.push(b);
        candidates.push(b.offset(1));
    }
    for &(a, _) in &ask_levels {
        candidates.push(a);
        candidates.push(a.offset(-1));
    }
    candidates.retain(|&p| p >= lowest && p <= highest);
    candidates.sort_unstable();
    candidates.dedup();

    let mut best: Option<(u64, u64)> = None;
    let mut lo = lowest;
    let mut hi = lowest;
    for &p in &candidates {
        let (d, s) = (demand(p), supply(p));
        let volume = d.min(s);
        let imbalance = d.abs_diff(s);
        let better = match best {
            None => true,
            Some((bv, bi)) => volume > bv || (volume == bv && imbalance < bi),
        };
        if better {
            best = Some((volume, imbalance));
            lo = p;
            hi = p;
        } else if best == Some((volume, imbalance)) {
            hi = p;
        }
    }

    let (volume, _) = best?;
    if volume == 0 {
        return None;
    }
    let price = match last_price {
        Some(last) if last >= lo && last <= hi => last,
        _ => Price::from_ticks((lo.ticks() + hi.ticks() + 1).div_euclid(2)),
    };
    Some(ClearingOutcome { price, volume })
}
