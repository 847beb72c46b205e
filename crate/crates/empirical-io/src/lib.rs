//! Ingestion and empirical replay for externally produced prediction logs.
//!
//! A log is a list of per-consumer rows (p1, p2, tau): each firm's binary
//! prediction and the realized demand state. From such a log this crate
//! estimates the market parameters (accuracies, demand share, prediction
//! correlation) by inverting the joint-distribution cells, and replays the
//! pricing game directly on the rows, turning the model-based utilities
//! into sample means with standard errors. That makes downstream analysis
//! independent of whatever classifier produced the predictions.

mod estimate;
mod game;
mod log;

pub use estimate::{estimate_params, EstimatedParams, FirmRates};
pub use game::{empirical_game, EmpiricalGame, PayoffParams};
pub use log::{load_log, PredictionLog};

use market_core::MarketError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EmpiricalError {
    #[error("could not read log: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}, column {column}: {reason}")]
    Parse {
        line: usize,
        column: usize,
        reason: &'static str,
    },
    #[error("log contains no data rows")]
    EmptyLog,
    #[error("degenerate log: {0}")]
    Degenerate(&'static str),
    #[error(transparent)]
    Market(#[from] MarketError),
}
