//! n-firm extension of the duopoly pricing game.
//!
//! A "coalition" of k firms shares one predictor (perfectly correlated
//! errors) while the remaining n−k firms predict independently; everyone
//! has the same accuracy. The crate provides the joint prediction
//! distribution, per-firm payoffs when ties split the market, the
//! second-stage equilibrium check for discriminating pricing, and the
//! first-stage test of whether a coalition of size k is stable against
//! single-firm switches. Everything is evaluated by exact enumeration
//! over the 2^n prediction vectors, which caps n at [`MAX_FIRMS`].

mod config;
mod omega;
mod payoff;
mod stability;

pub use config::{CoalitionConfig, MAX_FIRMS};
pub use omega::omega_k_prob;
pub use payoff::nfirm_payoff;
pub use stability::{
    coalition_stable, role_utilities, second_stage_bne, NfirmBne, Stability, StabilityOutcome,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum NfirmError {
    #[error("{name} = {value} violates {constraint}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },
    #[error("firm count n = {n} must lie in 2..={MAX_FIRMS} for exact enumeration")]
    FirmCount { n: usize },
    #[error("coalition size k = {k} exceeds the firm count n = {n}")]
    CoalitionTooLarge { k: usize, n: usize },
    #[error("expected {expected} entries for n firms, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("firm index {firm} out of range for n = {n}")]
    FirmIndex { firm: usize, n: usize },
    #[error("firm {firm} never predicts {prediction}; cannot condition on that event")]
    ZeroProbabilityConditioning { firm: usize, prediction: u8 },
}
