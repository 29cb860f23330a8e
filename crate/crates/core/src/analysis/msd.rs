use crate::error::{Error, Result};

/// Power-law fit `MSD(t) ∝ t^exponent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MsdFit {
    pub generation: u32,
    pub exponent: f64,
    pub intercept: f64,
    pub r2: f64,
    pub series_count: usize,
}

/// Ensemble mean squared deviation `E[(X_t - μ_t)²]` for `t = 0..L`, where
/// `μ_t` is the ensemble mean at `t` and `L` the shortest series length.
pub fn msd_curve(series: &[Vec<f64>]) -> Vec<f64> {
    let len = series.iter().map(Vec::len).min().unwrap_or(0);
    let n = series.len() as f64;
    (0..len)
        .map(|t| {
            let mu = series.iter().map(|s| s[t]).sum::<f64>() / n;
            series.iter().map(|s| (s[t] - mu).powi(2)).sum::<f64>() / n
        })
        .collect()
}

/// Least-squares slope of `ln MSD(t)` against `ln t` over `t >= 1`.
///
/// The fit is unchanged by adding a constant to every series or scaling all
/// of them.
/// Needs at least two series of length ten; timesteps where the MSD is zero
/// are left out of the fit, and an ensemble with fewer than two nonzero
/// points is an error.
pub fn msd_exponent(series: &[Vec<f64>], generation: u32) -> Result<MsdFit> {
    if series.len() < 2 {
        return Err(Error::Degenerate(format!(
            "MSD fit needs at least 2 series, got {}",
            series.len()
        )));
    }
    if let Some(short) = series.iter().find(|s| s.len() < 10) {
        return Err(Error::Degenerate(format!(
            "MSD fit needs series of length >= 10, got {}",
            short.len()
        )));
    }
    if series.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("price series"));
    }

    let points: Vec<(f64, f64)> = msd_curve(series)
        .into_iter()
        .enumerate()
        .skip(1)
        .filter(|&(_, m)| m > 0.0)
        .map(|(t, m)| ((t as f64).ln(), m.ln()))
        .collect();
    if points.len() < 2 {
        return Err(Error::Degenerate("price series never disperse; MSD is zero".into()));
    }

    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy > 0.0 { (sxy * sxy) / (sxx * syy) } else { 1.0 };
    if !slope.is_finite() {
        return Err(Error::Degenerate("MSD slope is not finite".into()));
    }
    Ok(MsdFit {
        generation,
        exponent: slope,
        intercept,
        r2,
        series_count: series.len(),
    })
}
