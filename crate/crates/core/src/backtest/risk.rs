use std::fmt;

use serde::{Deserialize, Serialize};

/// How the profit floor in [`cut_losses`] is set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LossMethod {
    /// Fixed floor at `lower_limit`.
    Absolute,
    /// Trailing floor `lower_limit` below the recent maximum.
    Rolling,
    /// Anything else; always halts once the absolute branch is bypassed.
    Unknown(String),
}

impl LossMethod {
    pub fn as_str(&self) -> &str {
        match self {
            LossMethod::Absolute => "absolute",
            LossMethod::Rolling => "rolling",
            LossMethod::Unknown(s) => s,
        }
    }
}

impl From<&str> for LossMethod {
    fn from(s: &str) -> Self {
        match s {
            "absolute" => LossMethod::Absolute,
            "rolling" => LossMethod::Rolling,
            other => LossMethod::Unknown(other.to_string()),
        }
    }
}

impl fmt::Display for LossMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for LossMethod {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for LossMethod {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(LossMethod::from(String::deserialize(d)?.as_str()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RiskConfig {
    pub loss_lower_limit: f64,
    pub loss_method: LossMethod,
    pub roll_ind: usize,
    pub delta_lower_limit: f64,
    pub max_shares: i64,
}

impl Default for RiskConfig {
    fn default() -> Self {
        RiskConfig {
            loss_lower_limit: -0.5,
            loss_method: LossMethod::Absolute,
            roll_ind: 100,
            delta_lower_limit: -0.5,
            max_shares: 150,
        }
    }
}

impl RiskConfig {
    pub fn validate(&self) -> crate::Result<()> {
        if self.max_shares < 1 {
            return Err(crate::Error::config("max_shares", "must be at least 1"));
        }
        if !self.loss_lower_limit.is_finite() || !self.delta_lower_limit.is_finite() {
            return Err(crate::Error::config("loss_lower_limit", "limits must be finite"));
        }
        Ok(())
    }
}

/// Level-based stop. Short series (at most `roll_ind` entries) and the
/// absolute method halt once the last profit is at or below `lower_limit`.
/// Otherwise the rolling method halts when the last profit sits more than
/// `-lower_limit` under the maximum of the trailing `roll_ind` entries (the
/// whole series when `roll_ind` is zero); any other method halts.
///
/// An empty series never halts.
pub fn cut_losses(profits: &[f64], lower_limit: f64, method: &LossMethod, roll_ind: usize) -> bool {
    let Some(&last) = profits.last() else {
        return false;
    };
    if *method == LossMethod::Absolute || profits.len() <= roll_ind {
        return last <= lower_limit;
    }
    match method {
        LossMethod::Rolling => {
            let window = if roll_ind == 0 {
                profits
            } else {
                &profits[profits.len() - roll_ind..]
            };
            let max = window.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            last - lower_limit < max
        }
        _ => true,
    }
}

/// Flow-based stop: halts when the last one-step profit change is at or
/// below `lower_limit`.
pub fn cut_losses_delta(profits: &[f64], lower_limit: f64) -> bool {
    match profits {
        [.., prev, last] => last - prev <= lower_limit,
        _ => false,
    }
}

/// Halts once the absolute position reaches `max_shares`.
pub fn limit_leverage(shares: &[i64], max_shares: i64) -> bool {
    shares.last().is_some_and(|n| n.abs() >= max_shares)
}

/// Mean of `max(-floor, π)`, the profit of a strategy whose losses are capped
/// at `floor`.
pub fn floored_mean(profits: &[f64], floor: f64) -> f64 {
    profits.iter().map(|&p| p.max(-floor)).sum::<f64>() / profits.len() as f64
}
