use std::fmt;

use serde::{Deserialize, Serialize};

/// Number of ticks in one unit of price.
pub const TICKS_PER_UNIT: i64 = 100;

/// Minimum price increment.
pub const TICK_SIZE: f64 = 1.0 / TICKS_PER_UNIT as f64;

/// A price on the tick grid, stored as an integer number of ticks.
///
/// Integer ticks keep clearing and cash settlement exact: one share traded at
/// one tick moves exactly one cent of cash.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Price(i64);

impl Price {
    pub const ONE_TICK: Price = Price(1);

    pub const fn from_ticks(ticks: i64) -> Self {
        Price(ticks)
    }

    /// Rounds a decimal price to the nearest tick (half away from zero).
    pub fn from_f64(value: f64) -> Self {
        Price((value * TICKS_PER_UNIT as f64).round() as i64)
    }

    /// Like [`Price::from_f64`] but never below one tick.
    pub fn from_f64_floored(value: f64) -> Self {
        Price::from_f64(value).max(Price::ONE_TICK)
    }

    pub const fn ticks(self) -> i64 {
        self.0
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / TICKS_PER_UNIT as f64
    }

    pub fn offset(self, ticks: i64) -> Self {
        Price(self.0 + ticks)
    }
}

impl fmt::Display for Price {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let abs = self.0.unsigned_abs();
        let per = TICKS_PER_UNIT as u64;
        write!(f, "{sign}{}.{:02}", abs / per, abs % per)
    }
}
