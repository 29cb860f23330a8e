//! Standalone execution of evolved networks outside the simulator.
//!
//! Real markets do not reveal the resting interest the networks were evolved
//! on. A corpus of `(ΔX, ΔV̂ᵇ, ΔV̂ᵃ)` triples is collected from simulations
//! without selection, and at run time the two interest deltas are replaced by
//! their ℓ1 nearest-neighbour conditional means given the observed ΔX.

mod algo;
mod corpus;
mod knn;

pub use algo::{MarginalizedAlgo, Position};
pub use corpus::{
    corpus_rows, generate_corpus, load_corpus, read_corpus, write_corpus, Corpus, CorpusConfig, CorpusRow, CorpusRun,
};
pub use knn::{conditional_expectation, KnnIndex, DEFAULT_K};
