//! First-stage model-selection game between two pricing firms.
//!
//! Before competing on prices, each firm picks where its predictor comes
//! from: a shared vendor (accuracy `a_c`, errors correlated with the rival
//! at `rho_c`) or its own data (accuracy `a_i`, errors independent of the
//! rival). Each of the four choice profiles induces a downstream pricing
//! game whose discriminating-equilibrium utilities fill a 2x2 payoff
//! matrix. This crate evaluates that matrix, flags pure Nash equilibria,
//! searches for the largest accuracy a firm would give up to stay
//! correlated, and provides the mixture-strategy sampler used to check
//! that a strong model can imitate a weak one.

mod game;
mod mixture;

pub use game::{
    max_sacrifice, meta_payoffs, MarketBase, MetaGame, MetaOutcome, Source, DEFAULT_SACRIFICE_TOL,
};
pub use mixture::{simulate_weaker, MixtureEstimate};

use market_core::MarketError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MetaError {
    #[error(transparent)]
    Market(#[from] MarketError),
    #[error("rho_c = {0} violates 0 < rho_c <= 1")]
    NonPositiveRhoC(f64),
    #[error("mixture weight is undefined at a_i = {0}; need a_i > 0.5")]
    MixtureUndefined(f64),
    #[error("accuracies must satisfy 0.5 <= a_c <= a_i <= 1, got a_c = {a_c}, a_i = {a_i}")]
    AccuracyOrder { a_c: f64, a_i: f64 },
    #[error(
        "no sacrificeable accuracy above a_c = {a_c}: the correlated profile \
         is not a strictly preferred equilibrium even at a_i = a_c"
    )]
    NoSacrifice { a_c: f64 },
}
