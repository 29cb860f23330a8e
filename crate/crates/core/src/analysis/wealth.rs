use std::collections::BTreeMap;

use super::{mean, median};
use crate::agents::Species;
use crate::evolution::GenerationRecord;

#[derive(Debug, Clone, PartialEq)]
pub struct WealthStat {
    pub generation: u32,
    pub species: Species,
    pub count: usize,
    pub mean: f64,
    pub median: f64,
}

/// Mean and median final wealth per species and generation, pooling every
/// record (e.g. several independent runs) that shares a generation index.
/// Species with no agents in a generation are omitted.
pub fn wealth_summary(records: &[GenerationRecord]) -> Vec<WealthStat> {
    let mut pooled: BTreeMap<(u32, Species), Vec<f64>> = BTreeMap::new();
    for r in records {
        for (species, w) in &r.species_wealth {
            pooled.entry((r.generation, *species)).or_default().extend(w);
        }
    }
    pooled
        .into_iter()
        .filter(|(_, w)| !w.is_empty())
        .map(|((generation, species), w)| WealthStat {
            generation,
            species,
            count: w.len(),
            mean: mean(&w),
            median: median(&w),
        })
        .collect()
}
