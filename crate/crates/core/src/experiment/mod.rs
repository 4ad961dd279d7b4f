//! Experiment orchestration: configuration files, parameter sweeps, CSV
//! output and the summary tables.

pub mod analytic;
pub mod config;
pub mod csv;
mod par;
pub mod sweep;
pub mod tables;

pub use config::{parse_config, parse_config_str, ExperimentSpec, SweepAxes};
pub use par::Execution;
pub use sweep::{expand_grid, run_experiment, summarize, GridPoint, ResultRow, SummaryRow};
