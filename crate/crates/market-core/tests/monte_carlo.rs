//! Simulation cross-checks: expected values computed from the closed-form
//! joint distribution must agree with sample means over draws from it.

use market_core::{
    consumer_welfare, expected_utility, is_discriminating_bne, joint_distribution, payoff, Firm,
    MarketParams, StrategyProfile, WelfareParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_params(rng: &mut ChaCha8Rng) -> MarketParams {
    MarketParams::new(
        rng.random_range(0.05..0.95),
        rng.random_range(0.5..1.0),
        rng.random_range(0.5..1.0),
        rng.random_range(0.0..0.5),
        rng.random_range(0.0..1.0),
        rng.random_range(1.5..6.0),
        1.0,
    )
    .unwrap()
}

fn simulate_utility(
    firm: Firm,
    p: &MarketParams,
    draws: usize,
    rng: &mut ChaCha8Rng,
) -> (f64, f64) {
    let jd = joint_distribution(p).unwrap();
    let profile = StrategyProfile::DISCRIMINATING;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..draws {
        let (p1, p2, d) = jd.sample(rng);
        let u = payoff(firm, profile.prices(p1, p2), d, p);
        sum += u;
        sum_sq += u * u;
    }
    let mean = sum / draws as f64;
    let var = (sum_sq / draws as f64 - mean * mean).max(0.0);
    (mean, (var / draws as f64).sqrt())
}

#[test]
fn expected_utility_matches_simulation_at_many_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..50 {
        let p = random_params(&mut rng);
        let firm = if i % 2 == 0 { Firm::One } else { Firm::Two };
        let exact = expected_utility(firm, StrategyProfile::DISCRIMINATING, &p).unwrap();
        let (mean, se) = simulate_utility(firm, &p, 1_000_000, &mut rng);
        assert!(
            (mean - exact).abs() <= 4.0 * se + 1e-9,
            "point {i}: exact {exact}, simulated {mean} ± {se} ({p:?})"
        );
    }
}

#[test]
fn anchored_utility_matches_a_large_simulation() {
    let p = MarketParams::symmetric(0.75, 0.9, 0.2, 0.0, 3.0, 1.0).unwrap();
    let exact = expected_utility(Firm::One, StrategyProfile::DISCRIMINATING, &p).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mean, se) = simulate_utility(Firm::One, &p, 10_000_000, &mut rng);
    assert!(
        (mean - exact).abs() <= 3.0 * se,
        "exact {exact}, simulated {mean} ± {se}"
    );
}

#[test]
fn welfare_strictly_decreases_in_correlation_where_discrimination_holds() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut tested = 0;
    while tested < 1000 {
        let mut p = random_params(&mut rng);
        p.a1 = p.a1.min(0.999);
        p.a2 = p.a2.min(0.999);
        let rho = rng.random_range(0.0..0.95);
        let lo = p.with_rho(rho);
        let hi = p.with_rho(rho + 0.05);
        if !(is_discriminating_bne(&lo).unwrap().is_bne
            && is_discriminating_bne(&hi).unwrap().is_bne)
        {
            continue;
        }
        let w = WelfareParams::for_market(&p);
        let w_lo = consumer_welfare(&lo, &w, StrategyProfile::DISCRIMINATING).unwrap();
        let w_hi = consumer_welfare(&hi, &w, StrategyProfile::DISCRIMINATING).unwrap();
        assert!(
            w_lo - w_hi > 1e-12,
            "welfare must drop: {w_lo} -> {w_hi} at {lo:?}"
        );
        tested += 1;
    }
}
