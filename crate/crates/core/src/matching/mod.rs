//! Frequent batch auction.
//!
//! Orders submitted during a timestep are staged and only interact with the
//! book when [`OrderBook::run_batch`] is called. Each batch clears at a single
//! price chosen to maximise executable volume; matching then walks both sides
//! in price-time priority. Market orders (no limit price) go first and never
//! rest.

mod book;
mod clearing;
mod order;

use std::io::{self, Write};

pub use book::{MarketObservation, OrderBook, DEFAULT_MAX_AGE};
pub use clearing::{clearing_price, ClearingOutcome};
pub use order::{AgentId, Order, OrderId, Side, Trade};

/// Writes trades as `timestep,price,shares,buy_owner,sell_owner` lines.
pub fn write_trade_log<W: Write>(trades: &[Trade], mut out: W) -> io::Result<()> {
    for trade in trades {
        writeln!(
            out,
            "{},{},{},{},{}",
            trade.timestep, trade.price, trade.shares, trade.buy_order_id.owner, trade.sell_order_id.owner
        )?;
    }
    Ok(())
}
