//! Core model of a pricing duopoly where each firm posts a High or Low price
//! based on a binary demand prediction. Predictions are right with per-firm
//! accuracy a_i and their errors co-move with strength ρ; the joint
//! distribution over (p1, p2, τ), the payoff tables, expected and
//! prediction-conditional utilities, the discriminating-equilibrium check,
//! and consumer welfare all live here, along with the brand-loyalty variant.

mod distribution;
mod error;
mod params;
mod payoff;
mod strategy;
mod utility;

pub use distribution::{joint_distribution, JointDistribution, OUTCOMES};
pub use error::MarketError;
pub use params::{LoyaltyParams, MarketParams, WelfareParams};
pub use payoff::{payoff, payoff_loyal, welfare_cell, Demand, Firm, Price};
pub use strategy::{Strategy, StrategyProfile};
pub use utility::{
    conditional_utility, conditional_utility_loyal, consumer_welfare, expected_utility,
    expected_utility_loyal, is_discriminating_bne, is_discriminating_bne_loyal, BneCheck,
};
