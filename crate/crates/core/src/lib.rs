//! Agent-based market simulation with a frequent batch auction, neuroevolution
//! of feed-forward trading agents, and a risk-supervised tick-data backtester
//! for the evolved strategies.
//!
//! The crate is organised bottom-up:
//!
//! * [`matching`]: the batch auction, resting book and depth observables.
//! * [`agents`]: static trader species and per-agent cash/share ledgers.
//! * [`neural`]: the 6→20→10→3 network, its genome and output decoding.
//! * [`market`]: one market: agents acting against a book for `T` steps.
//! * [`evolution`]: market-composition draws, tournament selection and
//!   Gaussian mutation over pooled populations.
//! * [`analysis`]: MSD exponents, KS distances, bootstrap means, wealth tables.
//! * [`marginal`]: the surrogate depth corpus, ℓ1 neighbour index and the
//!   marginalized standalone algorithm.
//! * [`backtest`]: tick ingestion, episode construction, risk routines and
//!   episode replay.

pub mod agents;
pub mod analysis;
pub mod backtest;
mod error;
pub mod evolution;
pub mod marginal;
pub mod market;
pub mod matching;
pub mod neural;
mod price;
pub mod seeding;

pub use agents::{Ledger, Species};
pub use error::{Error, Result};
pub use evolution::{EvoConfig, GenerationRecord, MarketSpec, Mechanism};
pub use market::{MarketConfig, MarketOutcome};
pub use matching::{Order, OrderBook, OrderId, Side, Trade};
pub use neural::{Genome, NetAction, NetInput};
pub use price::{Price, TICKS_PER_UNIT, TICK_SIZE};
