//! The four pipeline stages. Each takes the resolved configuration and an
//! output directory, writes its artifacts plus a `manifest.toml`, and never
//! touches its inputs.

pub mod analyze;
pub mod backtest;
pub mod corpus;
pub mod evolve;

pub use analyze::{analyze, AnalyzeSummary};
pub use backtest::{backtest, BacktestSummary};
pub use corpus::{corpus, CorpusSummary};
pub use evolve::{evolve, EvolveSummary};
