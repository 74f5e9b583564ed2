//! Command-line front end for Duffing-type oscillator experiments.
//!
//! `run` integrates one parameter set, `sweep` a grid of them in parallel,
//! and `reproduce-figure` the fixed 30-point grid with log-log panel data.

pub mod checks;
pub mod commands;
pub mod config;
mod error;
pub mod output;

pub use commands::{cmd_reproduce_figure, cmd_run, cmd_sweep, run_sweep, Outcome};
pub use config::{Check, CheckPlan, RawConfig, RunSpec, SweepSpec};
pub use error::CliError;
