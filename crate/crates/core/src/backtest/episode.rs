use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;

use super::TickRecord;
use crate::error::{Error, Result};

/// Seconds of trading per episode, counted from the start of the month.
pub const EPISODE_SECONDS: i64 = 1_000_000;
/// Resampling bucket width.
pub const BUCKET_MS: i64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct YearMonth {
    pub year: i32,
    pub month: u32,
}

impl YearMonth {
    pub fn new(year: i32, month: u32) -> Result<Self> {
        if !(1..=12).contains(&month) {
            return Err(Error::config("month", format!("{month} is not in 1..=12")));
        }
        Ok(YearMonth { year, month })
    }

    pub fn next(self) -> Self {
        if self.month == 12 {
            YearMonth {
                year: self.year + 1,
                month: 1,
            }
        } else {
            YearMonth {
                year: self.year,
                month: self.month + 1,
            }
        }
    }

    /// Every month from `self` through `last`, inclusive.
    pub fn through(self, last: YearMonth) -> Vec<YearMonth> {
        let mut out = Vec::new();
        let mut m = self;
        while m <= last {
            out.push(m);
            m = m.next();
        }
        out
    }

    /// Milliseconds since the epoch at midnight UTC on the first day.
    pub fn start_ms(self) -> i64 {
        NaiveDate::from_ymd_opt(self.year, self.month, 1)
            .expect("validated month")
            .and_hms_opt(0, 0, 0)
            .expect("midnight")
            .and_utc()
            .timestamp_millis()
    }
}

impl fmt::Display for YearMonth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

impl FromStr for YearMonth {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::config("month", format!("`{s}` is not YYYY-MM"));
        let (y, m) = s.split_once('-').ok_or_else(bad)?;
        YearMonth::new(y.parse().map_err(|_| bad())?, m.parse().map_err(|_| bad())?)
    }
}

impl serde::Serialize for YearMonth {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for YearMonth {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One trading episode: bucket-mean mid prices rescaled to start at 100.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeSeries {
    pub pair: String,
    pub month: YearMonth,
    pub prices: Vec<f64>,
    /// The factor `100 / X_0` applied to the raw quotes.
    pub scale: f64,
}

/// Resamples the first [`EPISODE_SECONDS`] of `month` for `pair` into
/// [`BUCKET_MS`] buckets holding the mean mid price.
///
/// The series runs from the first to the last bucket that saw a quote;
/// empty buckets in between repeat the previous price.
pub fn build_episode(ticks: &[TickRecord], month: YearMonth, pair: &str) -> Result<EpisodeSeries> {
    let start = month.start_ms();
    let end = start + EPISODE_SECONDS * 1000;
    let n_buckets = (EPISODE_SECONDS * 1000 / BUCKET_MS) as usize;
    let mut sums = vec![(0.0, 0u32); n_buckets];
    for t in ticks {
        if t.pair == pair && (start..end).contains(&t.timestamp_ms) {
            let b = ((t.timestamp_ms - start) / BUCKET_MS) as usize;
            sums[b].0 += t.mid();
            sums[b].1 += 1;
        }
    }
    let first = sums.iter().position(|s| s.1 > 0);
    let last = sums.iter().rposition(|s| s.1 > 0);
    let (Some(first), Some(last)) = (first, last) else {
        return Err(Error::EmptyMonth {
            pair: pair.to_string(),
            month: month.to_string(),
        });
    };

    let mut raw = Vec::with_capacity(last - first + 1);
    let mut prev = f64::NAN;
    for &(sum, n) in &sums[first..=last] {
        if n > 0 {
            prev = sum / n as f64;
        }
        raw.push(prev);
    }
    let x0 = raw[0];
    // dividing first keeps the opening price at exactly 100
    let prices = raw.iter().map(|x| x / x0 * 100.0).collect();
    Ok(EpisodeSeries {
        pair: pair.to_string(),
        month,
        prices,
        scale: 100.0 / x0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tick(month: YearMonth, offset_ms: i64, mid: f64) -> TickRecord {
        TickRecord {
            pair: "EUR/USD".into(),
            timestamp_ms: month.start_ms() + offset_ms,
            bid: mid,
            ask: mid,
        }
    }

    #[test]
    fn year_month_parsing_and_ranges() {
        let m: YearMonth = "2015-11".parse().unwrap();
        assert_eq!(m, YearMonth { year: 2015, month: 11 });
        assert_eq!(m.through("2016-02".parse().unwrap()).len(), 4);
        assert!("2015-13".parse::<YearMonth>().is_err());
        assert_eq!(m.to_string(), "2015-11");
    }

    #[test]
    fn constant_mid_is_flat_100() {
        let m = YearMonth::new(2016, 1).unwrap();
        let ticks: Vec<_> = (0..500).map(|i| tick(m, i * 7_000, 1.25)).collect();
        let ep = build_episode(&ticks, m, "EUR/USD").unwrap();
        assert!(ep.prices.iter().all(|&p| p == 100.0));
        assert_eq!(ep.scale, 80.0);
    }

    #[test]
    fn bucket_mean_and_forward_fill() {
        let m = YearMonth::new(2016, 2).unwrap();
        let ticks = vec![tick(m, 1_000, 1.10), tick(m, 9_000, 1.20), tick(m, 35_000, 1.30)];
        let ep = build_episode(&ticks, m, "EUR/USD").unwrap();
        assert_eq!(ep.prices.len(), 4);
        assert_eq!(ep.prices[0], 100.0);
        assert_eq!(ep.prices[1], 100.0);
        assert_eq!(ep.prices[2], 100.0);
        let raw0: f64 = (1.10 + 1.20) / 2.0;
        assert!((raw0 - 1.15).abs() < 1e-15);
        assert_eq!(ep.prices[3], 1.30 / raw0 * 100.0);
    }

    #[test]
    fn outside_window_and_other_pairs_ignored() {
        let m = YearMonth::new(2016, 3).unwrap();
        let mut other = tick(m, 0, 2.0);
        other.pair = "GBP/USD".into();
        let late = tick(m, EPISODE_SECONDS * 1000, 3.0);
        assert!(build_episode(&[other, late], m, "EUR/USD").is_err());
    }

    #[test]
    fn full_window_length_bound() {
        let m = YearMonth::new(2016, 4).unwrap();
        let ticks = vec![tick(m, 0, 1.0), tick(m, EPISODE_SECONDS * 1000 - 1, 1.0)];
        assert_eq!(build_episode(&ticks, m, "EUR/USD").unwrap().prices.len(), 100_000);
    }
}
