//! Closed-form quantities that characterize when firms gain from correlated
//! predictions, and the per-grid-point classification used to draw the
//! equilibrium/preference region maps.

use market_core::{
    consumer_welfare, expected_utility, is_discriminating_bne, BneCheck, Firm, MarketError,
    MarketParams, StrategyProfile, WelfareParams,
};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("sigma_star requires R > 1, got {0}")]
    RatioOutOfRange(f64),
    #[error("sigma_star requires 0 < theta <= 1, got {0}")]
    ThetaOutOfRange(f64),
    #[error("correlation comparison requires rho_b > rho_a, got {rho_a} and {rho_b}")]
    UnorderedCorrelations { rho_a: f64, rho_b: f64 },
    #[error(transparent)]
    Market(#[from] MarketError),
}

/// The price-insensitivity threshold below which firms prefer the more
/// correlated predictors: (Rθ − 1) / (2θ(R − 1)) for R = H/L. The raw value
/// is returned even outside [0, 0.5]; values ≤ 0 mean correlation never
/// helps, values ≥ 0.5 mean it always does within σ's range.
pub fn sigma_star(theta: f64, r: f64) -> Result<f64, AnalysisError> {
    if !r.is_finite() || r <= 1.0 {
        return Err(AnalysisError::RatioOutOfRange(r));
    }
    if !theta.is_finite() || theta <= 0.0 || theta > 1.0 {
        return Err(AnalysisError::ThetaOutOfRange(theta));
    }
    Ok((r * theta - 1.0) / (2.0 * theta * (r - 1.0)))
}

/// Per-firm gain from raising the prediction correlation from ρ_a to ρ_b
/// while both firms discriminate: ½·A·Δρ·[Hθ(1−2σ) + L(2σθ−1)] with
/// A = min(a1,a2) − a1a2. The same value applies to both firms. Positive
/// means both strictly prefer ρ_b. The `rho` field of `params` is ignored.
pub fn correlation_preference(
    params: &MarketParams,
    rho_a: f64,
    rho_b: f64,
) -> Result<f64, AnalysisError> {
    params.validate().map_err(AnalysisError::Market)?;
    params.with_rho(rho_a).validate()?;
    params.with_rho(rho_b).validate()?;
    if !(rho_b > rho_a) {
        return Err(AnalysisError::UnorderedCorrelations { rho_a, rho_b });
    }
    let a = params.correlation_capacity();
    let (t, s) = (params.theta, params.sigma);
    Ok(0.5
        * a
        * (rho_b - rho_a)
        * (params.h * t * (1.0 - 2.0 * s) + params.l * (2.0 * s * t - 1.0)))
}

/// Classification of one (σ, a, θ, H/L) point: is the discriminating profile
/// an equilibrium with independent (ρ=0) and with identical (ρ=1) models,
/// and when it is both, how do utility and consumer welfare compare across
/// the two extremes.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionClass {
    pub bne_at_rho0: bool,
    pub bne_at_rho1: bool,
    pub check_rho0: BneCheck,
    pub check_rho1: BneCheck,
    /// Firm utility at ρ=1 minus at ρ=0; present only when both flags hold.
    pub utility_diff: Option<f64>,
    /// Consumer welfare at ρ=1 minus at ρ=0; present only when both flags hold.
    pub welfare_diff: Option<f64>,
}

/// Evaluate the region class at the given market (its `rho` field is
/// overridden with 0 and 1).
pub fn classify_region(
    params: &MarketParams,
    welfare: &WelfareParams,
) -> Result<RegionClass, AnalysisError> {
    let p0 = params.with_rho(0.0);
    let p1 = params.with_rho(1.0);
    let check_rho0 = is_discriminating_bne(&p0)?;
    let check_rho1 = is_discriminating_bne(&p1)?;
    let both = check_rho0.is_bne && check_rho1.is_bne;
    let profile = StrategyProfile::DISCRIMINATING;
    let (utility_diff, welfare_diff) = if both {
        let u0 = expected_utility(Firm::One, profile, &p0)?;
        let u1 = expected_utility(Firm::One, profile, &p1)?;
        let w0 = consumer_welfare(&p0, welfare, profile)?;
        let w1 = consumer_welfare(&p1, welfare, profile)?;
        (Some(u1 - u0), Some(w1 - w0))
    } else {
        (None, None)
    };
    Ok(RegionClass {
        bne_at_rho0: check_rho0.is_bne,
        bne_at_rho1: check_rho1.is_bne,
        check_rho0,
        check_rho1,
        utility_diff,
        welfare_diff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn threshold_evaluates_the_closed_form() {
        assert!((sigma_star(0.75, 3.0).unwrap() - 1.25 / 3.0).abs() < 1e-12);
        assert!((sigma_star(1.0, 7.3).unwrap() - 0.5).abs() < 1e-12);
        assert!(sigma_star(0.25, 4.0).unwrap().abs() < 1e-12);
        // Below theta = 1/R the threshold goes negative; above 1/(2-1/R)... it
        // exceeds 0.5. Raw values are returned either way.
        assert!(sigma_star(0.2, 4.0).unwrap() < 0.0);
        assert!(sigma_star(0.99, 100.0).unwrap() < 0.5);
    }

    #[test]
    fn threshold_rejects_degenerate_inputs() {
        assert!(matches!(
            sigma_star(0.5, 1.0),
            Err(AnalysisError::RatioOutOfRange(_))
        ));
        assert!(matches!(
            sigma_star(0.5, 0.5),
            Err(AnalysisError::RatioOutOfRange(_))
        ));
        assert!(matches!(
            sigma_star(0.0, 2.0),
            Err(AnalysisError::ThetaOutOfRange(_))
        ));
    }

    fn params(theta: f64, a: f64, sigma: f64, h: f64) -> MarketParams {
        MarketParams::symmetric(theta, a, sigma, 0.0, h, 1.0).unwrap()
    }

    #[test]
    fn preference_statistic_matches_hand_arithmetic() {
        let p = params(0.75, 0.8, 0.1, 3.0);
        let got = correlation_preference(&p, 0.0, 1.0).unwrap();
        assert!((got - 0.076).abs() < 1e-12);
    }

    #[test]
    fn preference_is_zero_when_marginals_leave_no_room() {
        let p = MarketParams::new(0.6, 1.0, 0.8, 0.2, 0.0, 2.0, 1.0).unwrap();
        assert_eq!(correlation_preference(&p, 0.1, 0.9).unwrap(), 0.0);
    }

    #[test]
    fn at_half_sigma_independence_always_wins() {
        for theta in [0.3, 0.6, 0.99] {
            let p = params(theta, 0.8, 0.5, 4.0);
            assert!(correlation_preference(&p, 0.0, 1.0).unwrap() < 0.0);
        }
    }

    #[test]
    fn preference_requires_ordered_correlations() {
        let p = params(0.75, 0.8, 0.1, 3.0);
        assert!(matches!(
            correlation_preference(&p, 0.5, 0.5),
            Err(AnalysisError::UnorderedCorrelations { .. })
        ));
        assert!(correlation_preference(&p, 0.5, 1.5).is_err());
    }

    #[test]
    fn preference_sign_agrees_with_exact_utilities() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10_000 {
            let p = MarketParams::new(
                rng.random_range(0.05..1.0),
                rng.random_range(0.5..1.0),
                rng.random_range(0.5..1.0),
                rng.random_range(0.0..0.5),
                0.0,
                rng.random_range(1.1..8.0),
                1.0,
            )
            .unwrap();
            let rho_a = rng.random_range(0.0..0.5);
            let rho_b = rng.random_range(rho_a + 0.01..1.0);
            let stat = correlation_preference(&p, rho_a, rho_b).unwrap();
            for firm in [Firm::One, Firm::Two] {
                let ua =
                    expected_utility(firm, StrategyProfile::DISCRIMINATING, &p.with_rho(rho_a))
                        .unwrap();
                let ub =
                    expected_utility(firm, StrategyProfile::DISCRIMINATING, &p.with_rho(rho_b))
                        .unwrap();
                assert!(
                    (stat - (ub - ua)).abs() < 1e-12,
                    "statistic {stat} vs direct {} at {p:?}",
                    ub - ua
                );
            }
        }
    }

    #[test]
    fn preference_strictly_decreases_in_sigma() {
        let mut prev = f64::INFINITY;
        for i in 0..=50 {
            let sigma = 0.5 * i as f64 / 50.0;
            let p = params(0.7, 0.85, sigma, 3.0);
            let stat = correlation_preference(&p, 0.2, 0.9).unwrap();
            assert!(stat < prev);
            prev = stat;
        }
    }

    #[test]
    fn classification_flags_follow_the_equilibrium_checks() {
        // Uninformative predictors: no equilibrium at rho=0.
        let p = params(0.5, 0.5, 0.2, 2.0);
        let w = WelfareParams::for_market(&p);
        let class = classify_region(&p, &w).unwrap();
        assert!(!class.bne_at_rho0);
        assert_eq!(class.utility_diff, None);
        assert_eq!(class.welfare_diff, None);
    }

    #[test]
    fn preferred_correlation_point_is_classified_positive() {
        let p = params(0.75, 0.95, 0.05, 4.0);
        let w = WelfareParams::for_market(&p);
        let class = classify_region(&p, &w).unwrap();
        assert!(class.bne_at_rho0 && class.bne_at_rho1);
        assert!(class.utility_diff.unwrap() > 0.0);
        // What firms gain, consumers lose.
        assert!(class.welfare_diff.unwrap() < 0.0);
        assert!(p.sigma < sigma_star(0.75, 4.0).unwrap());
    }

    #[test]
    fn utility_diff_sign_flips_at_the_threshold() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut seen_both = 0;
        while seen_both < 300 {
            let theta = rng.random_range(0.3..1.0);
            let r = rng.random_range(1.2..6.0);
            let a = rng.random_range(0.55..0.999);
            let sigma = rng.random_range(0.0..0.5);
            let star = sigma_star(theta, r).unwrap();
            if (sigma - star).abs() < 1e-9 {
                continue;
            }
            let p = MarketParams::symmetric(theta, a, sigma, 0.0, r, 1.0).unwrap();
            let w = WelfareParams::for_market(&p);
            let class = classify_region(&p, &w).unwrap();
            let Some(diff) = class.utility_diff else {
                continue;
            };
            assert_eq!(
                diff > 0.0,
                sigma < star,
                "sigma {sigma} vs threshold {star} gave diff {diff}"
            );
            seen_both += 1;
        }
    }
}
