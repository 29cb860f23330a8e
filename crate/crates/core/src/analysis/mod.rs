//! Statistics over simulation and backtest outputs.

mod bootstrap;
mod ks;
mod msd;
mod wealth;

pub use bootstrap::{bootstrap_mean, prob_greater, BootstrapMeans, DEFAULT_BOOTSTRAP_SAMPLES};
pub use ks::{ecdf, ks_statistic, Cohort, ProfitSample};
pub use msd::{msd_curve, msd_exponent, MsdFit};
pub use wealth::{wealth_summary, WealthStat};

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Median; the average of the two central values for even lengths.
pub fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}
