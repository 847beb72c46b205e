//! Parameter sweeps over the correlated-prediction pricing game.
//!
//! A sweep is described by a small TOML config: a `mode` choosing what to
//! evaluate, fixed `[params]`, and optional `[[axes]]` spanning a grid.
//! Running one writes three artifacts next to each other: a CSV with one
//! row per grid point, a plain-text schema describing every column, and a
//! JSON manifest recording the config, seed, versions, and wall time.
//! Identical configs produce byte-identical CSV and schema files; the
//! manifest is excluded because it carries the wall time.

pub mod config;
pub mod modes;
pub mod output;
pub mod runner;

pub use config::{
    load_config, parse_config, Axis, AxisSpec, ConfigError, ConfigFailure, FixedValue, Mode,
    SweepConfig, DEFAULT_STEPS,
};
pub use modes::{columns, ColumnDoc};
pub use output::{resolve_paths, write_atomic, OutputPaths, ENV_OUTPUT_DIR};
pub use runner::{evaluate, run_sweep, RunSummary, SweepError};
