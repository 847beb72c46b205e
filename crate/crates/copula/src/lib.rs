//! Gaussian-copula backend for correlated binary predictions.
//!
//! Each firm's binary prediction is driven by a latent standard normal
//! coordinate: under high demand the firm predicts 1 exactly when its
//! coordinate falls below the threshold Φ⁻¹(a_i), and under low demand
//! the rule flips, so the per-firm accuracy is a_i either way. Firms are
//! grouped into clusters with one latent correlation inside each cluster
//! and a global one across clusters. Joint prediction probabilities are
//! then orthant integrals of the multivariate normal, estimated by a
//! seeded quasi-Monte-Carlo routine, and correlations specified on the
//! binary scale are converted to latent ones by inverting the polychoric
//! relation.

mod normal;
mod orthant;
mod polychoric;
mod spec;

pub use normal::bivariate_cdf;
pub use orthant::{copula_joint_prob, Integration, ProbEstimate, MIN_SAMPLES};
pub use polychoric::{binary_correlation, polychoric_to_gaussian, POLYCHORIC_TOL};
pub use spec::{assemble_covariance, CopulaSpec, Covariance};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CopulaError {
    #[error("clusters must partition the firm indices 0..{n}: {detail}")]
    BadPartition { n: usize, detail: &'static str },
    #[error("{name} = {value} violates {constraint}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },
    #[error("expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("covariance is not positive semi-definite: smallest eigenvalue {0:.3e}")]
    NotPositiveSemiDefinite(f64),
    #[error("covariance factorization failed despite a positive semi-definite spectrum")]
    FactorizationFailed,
    #[error("samples = {0} is below the minimum of {MIN_SAMPLES}")]
    TooFewSamples(u64),
    #[error("integration produced non-finite values")]
    IntegrationFailure,
    #[error(
        "binary correlation {rho_binary} is unachievable at these marginals; \
         the latent scale only reaches [{min:.6}, {max:.6}]"
    )]
    UnachievableCorrelation { rho_binary: f64, min: f64, max: f64 },
}
