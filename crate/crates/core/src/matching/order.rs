use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Price;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AgentId(pub u32);

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `{owner}-{sequence}`; unique per owner because each agent numbers its own
/// orders. Ordering is `(owner, seq)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrderId {
    pub owner: AgentId,
    pub seq: u64,
}

impl OrderId {
    pub fn new(owner: AgentId, seq: u64) -> Self {
        OrderId { owner, seq }
    }
}

impl fmt::Display for OrderId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.owner, self.seq)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Bid,
    Ask,
}

impl Side {
    /// +1 for a buy, -1 for a sell.
    pub fn sign(self) -> i64 {
        match self {
            Side::Bid => 1,
            Side::Ask => -1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Order {
    pub id: OrderId,
    pub side: Side,
    pub shares: u64,
    /// `None` is a market order (NaP).
    pub price: Option<Price>,
    pub submit_time: u64,
    /// Lifetime in timesteps; 0 means the engine default.
    pub time_in_force: u64,
}

impl Order {
    pub fn limit(id: OrderId, side: Side, shares: u64, price: Price, submit_time: u64) -> Self {
        Order {
            id,
            side,
            shares,
            price: Some(price),
            submit_time,
            time_in_force: 0,
        }
    }

    pub fn market(id: OrderId, side: Side, shares: u64, submit_time: u64) -> Self {
        Order {
            id,
            side,
            shares,
            price: None,
            submit_time,
            time_in_force: 0,
        }
    }

    pub fn owner(&self) -> AgentId {
        self.id.owner
    }

    pub fn is_market(&self) -> bool {
        self.price.is_none()
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.shares == 0 {
            return Err(Error::InvalidOrder("shares must be positive"));
        }
        if matches!(self.price, Some(p) if p.ticks() < 0) {
            return Err(Error::InvalidOrder("price must be nonnegative"));
        }
        Ok(())
    }

    /// Age order within a price level: older first, then by id.
    pub(crate) fn time_priority(&self, other: &Order) -> Ordering {
        self.submit_time
            .cmp(&other.submit_time)
            .then_with(|| self.id.cmp(&other.id))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Trade {
    pub buy_order_id: OrderId,
    pub sell_order_id: OrderId,
    pub shares: u64,
    pub price: Price,
    pub timestep: u64,
}

impl Trade {
    pub fn buyer(&self) -> AgentId {
        self.buy_order_id.owner
    }

    pub fn seller(&self) -> AgentId {
        self.sell_order_id.owner
    }

    /// Cash exchanged, in ticks × shares (cents at the default tick size).
    pub fn notional_ticks(&self) -> i64 {
        self.shares as i64 * self.price.ticks()
    }
}
