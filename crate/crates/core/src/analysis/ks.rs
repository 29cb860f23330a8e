use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cohort {
    /// All evolved strategies from the chosen generation.
    Evolved,
    /// Top validation performers.
    Elite,
    /// Untrained random networks.
    Random,
}

impl Cohort {
    pub const ALL: [Cohort; 3] = [Cohort::Evolved, Cohort::Elite, Cohort::Random];

    pub fn tag(self) -> &'static str {
        match self {
            Cohort::Evolved => "evolved",
            Cohort::Elite => "elite",
            Cohort::Random => "random",
        }
    }
}

impl fmt::Display for Cohort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Per-episode profits of one cohort.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfitSample {
    pub cohort: Cohort,
    pub profits: Vec<f64>,
}

impl ProfitSample {
    pub fn new(cohort: Cohort, profits: Vec<f64>) -> Result<Self> {
        if profits.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite("profit sample"));
        }
        Ok(ProfitSample { cohort, profits })
    }

    pub fn episodes(&self) -> usize {
        self.profits.len()
    }

    pub fn ks_distance(&self, other: &ProfitSample) -> Result<f64> {
        ks_statistic(&self.profits, &other.profits)
    }
}

/// Two-sample Kolmogorov-Smirnov statistic `sup_x |F_a(x) - F_b(x)|`.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySample("KS statistic"));
    }
    if a.iter().chain(b).any(|x| x.is_nan()) {
        return Err(Error::NonFinite("KS sample"));
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (n, m) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        // step past every copy of the smallest remaining value on both sides
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    Ok(d)
}

/// Empirical CDF as `(x, F(x))` at each distinct sample value.
pub fn ecdf(sample: &[f64]) -> Vec<(f64, f64)> {
    let mut v = sample.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (i, x) in v.iter().enumerate() {
        let f = (i + 1) as f64 / n;
        match out.last_mut() {
            Some(last) if last.0 == *x => last.1 = f,
            _ => out.push((*x, f)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_and_disjoint() {
        let a = [1.0, 2.0, 3.0, 3.0];
        assert_eq!(ks_statistic(&a, &a).unwrap(), 0.0);
        assert_eq!(ks_statistic(&a, &[10.0, 11.0]).unwrap(), 1.0);
    }

    #[test]
    fn empty_is_error() {
        assert!(ks_statistic(&[], &[1.0]).is_err());
        assert!(ks_statistic(&[1.0], &[]).is_err());
    }

    #[test]
    fn ties_across_samples() {
        // F_a jumps to 1/2 at 1, F_b to 1 at 1
        assert_eq!(ks_statistic(&[1.0, 2.0], &[1.0]).unwrap(), 0.5);
    }

    #[test]
    fn ecdf_steps() {
        assert_eq!(ecdf(&[2.0, 1.0, 2.0, 5.0]), vec![(1.0, 0.25), (2.0, 0.75), (5.0, 1.0)]);
    }

    #[test]
    fn profit_sample_rejects_nan() {
        assert!(ProfitSample::new(Cohort::Elite, vec![1.0, f64::NAN]).is_err());
    }
}
