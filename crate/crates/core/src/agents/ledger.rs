use serde::{Deserialize, Serialize};

use crate::{Price, TICKS_PER_UNIT};

/// Cash and inventory of one agent. Cash is held in ticks (cents at the
/// default tick size) so settlement is exact and markets are exactly
/// zero-sum. Short positions are allowed and there is no solvency check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ledger {
    cash_ticks: i64,
    shares: i64,
    initial_ticks: i64,
}

/// A ledger valued at some mark price, in price units.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AgentView {
    pub cash: f64,
    pub shares: i64,
    pub profit: f64,
}

impl Ledger {
    pub fn new(cash: f64) -> Self {
        let cash_ticks = (cash * TICKS_PER_UNIT as f64).round() as i64;
        Ledger {
            cash_ticks,
            shares: 0,
            initial_ticks: cash_ticks,
        }
    }

    pub fn cash_ticks(&self) -> i64 {
        self.cash_ticks
    }

    pub fn cash(&self) -> f64 {
        self.cash_ticks as f64 / TICKS_PER_UNIT as f64
    }

    pub fn shares(&self) -> i64 {
        self.shares
    }

    /// Initial wealth (all cash, no shares).
    pub fn initial_ticks(&self) -> i64 {
        self.initial_ticks
    }

    /// Mark-to-market wealth; with no price yet, inventory is worth nothing.
    pub fn wealth_ticks(&self, mark: Option<Price>) -> i64 {
        self.cash_ticks + self.shares * mark.map_or(0, Price::ticks)
    }

    pub fn profit_ticks(&self, mark: Option<Price>) -> i64 {
        self.wealth_ticks(mark) - self.initial_ticks
    }

    pub fn wealth(&self, mark: Option<Price>) -> f64 {
        self.wealth_ticks(mark) as f64 / TICKS_PER_UNIT as f64
    }

    pub fn profit(&self, mark: Option<Price>) -> f64 {
        self.profit_ticks(mark) as f64 / TICKS_PER_UNIT as f64
    }

    pub fn buy(&mut self, shares: u64, price: Price) {
        self.shares += shares as i64;
        self.cash_ticks -= shares as i64 * price.ticks();
    }

    pub fn sell(&mut self, shares: u64, price: Price) {
        self.shares -= shares as i64;
        self.cash_ticks += shares as i64 * price.ticks();
    }

    pub fn view(&self, mark: Option<Price>) -> AgentView {
        AgentView {
            cash: self.cash(),
            shares: self.shares,
            profit: self.profit(mark),
        }
    }
}
