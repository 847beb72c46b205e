use crate::MetaError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Monte-Carlo estimate of the price distribution induced by the mixture
/// strategy that makes a stronger predictor imitate a weaker one: follow
/// the discriminating rule with probability `q`, invert it otherwise. At
/// `q = (a_c + a_i - 1) / (2 a_i - 1)` the conditional law of the posted
/// price matches what a predictor of accuracy `a_c` would produce.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureEstimate {
    /// Mixture weight on following one's own prediction.
    pub q: f64,
    /// Empirical share of High prices when demand is high.
    pub high_given_high: f64,
    /// Empirical share of High prices when demand is low.
    pub high_given_low: f64,
    /// Binomial standard error of `high_given_high`.
    pub se_given_high: f64,
    /// Binomial standard error of `high_given_low`.
    pub se_given_low: f64,
    pub draws: u64,
}

/// Sample the mixture strategy `draws` times under each demand state and
/// report the conditional High-price frequencies. The exact targets are
/// `a_c` under high demand and `1 - a_c` under low demand.
pub fn simulate_weaker(
    a_i: f64,
    a_c: f64,
    draws: u64,
    seed: u64,
) -> Result<MixtureEstimate, MetaError> {
    if !(a_i > 0.5) {
        return Err(MetaError::MixtureUndefined(a_i));
    }
    if !(0.5 <= a_c && a_c <= a_i && a_i <= 1.0) {
        return Err(MetaError::AccuracyOrder { a_c, a_i });
    }
    assert!(draws > 0, "need at least one draw");

    let q = (a_c + a_i - 1.0) / (2.0 * a_i - 1.0);
    debug_assert!((0.0..=1.0).contains(&q));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut highs = [0u64; 2];
    for (slot, demand_high) in [(0usize, true), (1usize, false)] {
        for _ in 0..draws {
            let correct = rng.random::<f64>() < a_i;
            let predicts_high = correct == demand_high;
            let follows = rng.random::<f64>() < q;
            // High is posted when following a High prediction or inverting
            // a Low one.
            if predicts_high == follows {
                highs[slot] += 1;
            }
        }
    }
    let n = draws as f64;
    let rate = |count: u64| count as f64 / n;
    let se = |p: f64| (p * (1.0 - p) / n).sqrt();
    let (p_h, p_l) = (rate(highs[0]), rate(highs[1]));
    Ok(MixtureEstimate {
        q,
        high_given_high: p_h,
        high_given_low: p_l,
        se_given_high: se(p_h),
        se_given_low: se(p_l),
        draws,
    })
}
