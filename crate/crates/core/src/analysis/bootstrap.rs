use rand::Rng;

use crate::error::{Error, Result};

pub const DEFAULT_BOOTSTRAP_SAMPLES: usize = 10_000;
const MIN_BOOTSTRAP_SAMPLES: usize = 1_000;

/// Bootstrap distribution of the sample mean.
#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapMeans {
    pub means: Vec<f64>,
    /// Fraction of resampled means strictly above zero.
    pub p_positive: f64,
}

/// Nonparametric bootstrap of the mean: `n_boot` resamples with replacement,
/// each the size of `sample`.
pub fn bootstrap_mean<R: Rng + ?Sized>(sample: &[f64], n_boot: usize, rng: &mut R) -> Result<BootstrapMeans> {
    if sample.is_empty() {
        return Err(Error::EmptySample("bootstrap"));
    }
    if n_boot < MIN_BOOTSTRAP_SAMPLES {
        return Err(Error::config(
            "n_boot",
            format!("must be at least {MIN_BOOTSTRAP_SAMPLES}"),
        ));
    }
    let n = sample.len();
    let means: Vec<f64> = (0..n_boot)
        .map(|_| (0..n).map(|_| sample[rng.random_range(0..n)]).sum::<f64>() / n as f64)
        .collect();
    let p_positive = means.iter().filter(|&&m| m > 0.0).count() as f64 / n_boot as f64;
    Ok(BootstrapMeans { means, p_positive })
}

/// `P(mean_a > mean_b)` estimated by pairing independent bootstrap draws.
pub fn prob_greater(a: &BootstrapMeans, b: &BootstrapMeans) -> f64 {
    let n = a.means.len().min(b.means.len());
    if n == 0 {
        return f64::NAN;
    }
    let wins = a.means.iter().zip(&b.means).filter(|(x, y)| x > y).count();
    wins as f64 / n as f64
}
