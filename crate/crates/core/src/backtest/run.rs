use std::fmt;
use std::str::FromStr;

use super::{cut_losses, cut_losses_delta, limit_leverage, EpisodeSeries, RiskConfig, YearMonth};
use crate::error::{Error, Result};
use crate::marginal::{MarginalizedAlgo, Position};
use crate::neural::NetAction;

/// Anything that turns a price series into market orders.
pub trait Trader {
    /// Clears per-episode memory.
    fn reset(&mut self);
    /// Action after the price moved by `dx`, given the position marked at
    /// the new price.
    fn decide(&mut self, dx: f64, position: &Position) -> Result<NetAction>;
}

impl Trader for MarginalizedAlgo {
    fn reset(&mut self) {
        MarginalizedAlgo::reset(self);
    }

    fn decide(&mut self, dx: f64, position: &Position) -> Result<NetAction> {
        self.step(dx, position)
    }
}

/// The risk routine that stopped an episode, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Halt {
    None,
    CutLosses,
    CutLossesDelta,
    LimitLeverage,
}

impl Halt {
    pub fn as_str(self) -> &'static str {
        match self {
            Halt::None => "none",
            Halt::CutLosses => "cut_losses",
            Halt::CutLossesDelta => "cut_losses_delta",
            Halt::LimitLeverage => "limit_leverage",
        }
    }
}

impl fmt::Display for Halt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Halt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "none" => Halt::None,
            "cut_losses" => Halt::CutLosses,
            "cut_losses_delta" => Halt::CutLossesDelta,
            "limit_leverage" => Halt::LimitLeverage,
            other => return Err(Error::config("halt_reason", format!("unknown value `{other}`"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BacktestResult {
    pub genome_id: String,
    pub pair: String,
    pub month: YearMonth,
    /// Mark-to-market profit `π_t` from `t = 0`, ending at the halt step.
    pub profits: Vec<f64>,
    /// Position `N_t` alongside `profits`.
    pub shares: Vec<i64>,
    pub halt: Halt,
    pub halt_t: Option<usize>,
    /// `100 / X_0` of the episode, to convert profits back to quote units.
    pub scale: f64,
}

impl BacktestResult {
    pub fn final_profit(&self) -> f64 {
        *self.profits.last().expect("series starts with t = 0")
    }
}

/// Replays `ep` through `trader` from a flat, zero-cash start.
///
/// At every `t >= 1` the trader sees `ΔX_t` and its position marked at
/// `X_t`, and its order fills in full at `X_t`. After the fill the three risk routines run in the order
/// cut_losses, cut_losses_delta, limit_leverage; the first to fire ends the
/// episode.
pub fn run_episode<T: Trader + ?Sized>(
    trader: &mut T,
    genome_id: &str,
    ep: &EpisodeSeries,
    risk: &RiskConfig,
) -> Result<BacktestResult> {
    trader.reset();
    let mut position = Position::default();
    let mut profits = vec![0.0];
    let mut shares = vec![0];
    let mut halt = Halt::None;
    let mut halt_t = None;
    for t in 1..ep.prices.len() {
        let x = ep.prices[t];
        position.mark(x);
        let action = trader.decide(x - ep.prices[t - 1], &position)?;
        position.fill(&action, x);
        profits.push(position.profit);
        shares.push(position.shares);

        let fired = if cut_losses(&profits, risk.loss_lower_limit, &risk.loss_method, risk.roll_ind) {
            Halt::CutLosses
        } else if cut_losses_delta(&profits, risk.delta_lower_limit) {
            Halt::CutLossesDelta
        } else if limit_leverage(&shares, risk.max_shares) {
            Halt::LimitLeverage
        } else {
            Halt::None
        };
        if fired != Halt::None {
            halt = fired;
            halt_t = Some(t);
            break;
        }
    }
    Ok(BacktestResult {
        genome_id: genome_id.to_string(),
        pair: ep.pair.clone(),
        month: ep.month,
        profits,
        shares,
        halt,
        halt_t,
        scale: ep.scale,
    })
}
