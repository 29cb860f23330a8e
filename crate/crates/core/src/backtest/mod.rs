//! Replaying marginalized algorithms over resampled FX quotes under risk
//! supervision.

mod episode;
mod results;
mod risk;
mod run;
mod ticks;

pub use episode::{build_episode, EpisodeSeries, YearMonth, BUCKET_MS, EPISODE_SECONDS};
pub use results::{read_results, select_elite, total_profits, write_results, ResultRow, RESULTS_HEADER};
pub use risk::{cut_losses, cut_losses_delta, floored_mean, limit_leverage, LossMethod, RiskConfig};
pub use run::{run_episode, BacktestResult, Halt, Trader};
pub use ticks::{ingest_ticks, load_ticks, write_ticks, Ingested, TickRecord};
