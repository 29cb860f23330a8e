//! Command-line pipeline around `evomarket-core`: evolve populations, build
//! the surrogate depth corpus, backtest on tick data, and analyze the
//! stored artifacts.

pub mod cli;
pub mod commands;
pub mod config;
pub mod table;

pub use cli::{run, run_args, Cli, Command};
pub use config::RunConfig;
