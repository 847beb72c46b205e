use crate::log::PredictionLog;
use crate::EmpiricalError;
use market_core::{payoff, BneCheck, Demand, Firm, MarketParams, Price, Strategy, StrategyProfile};

/// The payoff side of the market: price levels and the split parameter.
/// Demand beliefs play no role once the log fixes the outcomes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PayoffParams {
    pub sigma: f64,
    pub h: f64,
    pub l: f64,
}

impl PayoffParams {
    pub fn new(sigma: f64, h: f64, l: f64) -> Result<Self, EmpiricalError> {
        let params = PayoffParams { sigma, h, l };
        params.market()?;
        Ok(params)
    }

    /// Full parameter set for the payoff functions; the belief fields are
    /// placeholders that the payoffs never read.
    fn market(&self) -> Result<MarketParams, EmpiricalError> {
        Ok(MarketParams::new(
            0.5, 0.75, 0.75, self.sigma, 0.0, self.h, self.l,
        )?)
    }
}

/// Sample-mean replay of the pricing game on a log: per-firm utilities
/// with standard errors for every pure-strategy profile, indexed by
/// position in `Strategy::ALL`, plus the equilibrium check for the
/// discriminating profile. A deviation slack is `None` when the firm
/// never makes that prediction in the log, mirroring the model-based
/// check on zero-probability branches.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalGame {
    pub means: [[(f64, f64); 4]; 4],
    pub std_errors: [[(f64, f64); 4]; 4],
    pub bne: BneCheck,
}

impl EmpiricalGame {
    pub fn utility(&self, s1: Strategy, s2: Strategy) -> (f64, f64) {
        self.means[strategy_index(s1)][strategy_index(s2)]
    }

    pub fn std_error(&self, s1: Strategy, s2: Strategy) -> (f64, f64) {
        self.std_errors[strategy_index(s1)][strategy_index(s2)]
    }
}

fn strategy_index(s: Strategy) -> usize {
    Strategy::ALL
        .iter()
        .position(|&t| t == s)
        .expect("ALL covers every strategy")
}

/// Replay every strategy profile against the logged rows.
pub fn empirical_game(
    log: &PredictionLog,
    params: PayoffParams,
) -> Result<EmpiricalGame, EmpiricalError> {
    let market = params.market()?;
    let counts = log.cell_counts();
    let n = log.len() as f64;

    let mut means = [[(0.0, 0.0); 4]; 4];
    let mut std_errors = [[(0.0, 0.0); 4]; 4];
    for (i, &s1) in Strategy::ALL.iter().enumerate() {
        for (j, &s2) in Strategy::ALL.iter().enumerate() {
            let profile = StrategyProfile::new(s1, s2);
            let mut stats = [(0.0, 0.0); 2];
            for_each_cell(&counts, |p1, p2, d, c| {
                let prices = profile.prices(p1, p2);
                for (firm, stat) in [Firm::One, Firm::Two].into_iter().zip(&mut stats) {
                    let pay = payoff(firm, prices, d, &market);
                    stat.0 += c * pay;
                    stat.1 += c * pay * pay;
                }
            });
            let summarize = |(sum, sum_sq): (f64, f64)| {
                let mean = sum / n;
                let variance = if n > 1.0 {
                    ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0)
                } else {
                    0.0
                };
                (mean, (variance / n).sqrt())
            };
            means[i][j] = (summarize(stats[0]).0, summarize(stats[1]).0);
            std_errors[i][j] = (summarize(stats[0]).1, summarize(stats[1]).1);
        }
    }

    let mut slacks = [None; 4];
    let mut idx = 0;
    for firm in [Firm::One, Firm::Two] {
        for prediction in [true, false] {
            let follow = Strategy::DISCRIMINATING.price(prediction);
            let deviate = match follow {
                Price::High => Price::Low,
                Price::Low => Price::High,
            };
            let mut mass = 0.0;
            let mut gap = 0.0;
            for_each_cell(&counts, |p1, p2, d, c| {
                let (own, opp) = match firm {
                    Firm::One => (p1, p2),
                    Firm::Two => (p2, p1),
                };
                if own != prediction {
                    return;
                }
                let opp_price = Strategy::DISCRIMINATING.price(opp);
                let order = |own_price| match firm {
                    Firm::One => (own_price, opp_price),
                    Firm::Two => (opp_price, own_price),
                };
                mass += c;
                gap += c
                    * (payoff(firm, order(follow), d, &market)
                        - payoff(firm, order(deviate), d, &market));
            });
            slacks[idx] = (mass > 0.0).then(|| gap / mass);
            idx += 1;
        }
    }
    let is_bne = slacks.iter().flatten().all(|s| *s >= 0.0);

    Ok(EmpiricalGame {
        means,
        std_errors,
        bne: BneCheck { is_bne, slacks },
    })
}

fn for_each_cell(counts: &[[[u64; 2]; 2]; 2], mut f: impl FnMut(bool, bool, Demand, f64)) {
    for (tau, demand) in [(0, Demand::Low), (1, Demand::High)] {
        for p1 in 0..2 {
            for p2 in 0..2 {
                let c = counts[tau][p1][p2];
                if c > 0 {
                    f(p1 == 1, p2 == 1, demand, c as f64);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use market_core::{expected_utility, is_discriminating_bne, joint_distribution};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sampled_log(p: &MarketParams, draws: usize, seed: u64) -> PredictionLog {
        let jd = joint_distribution(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows = (0..draws).map(|_| jd.sample(&mut rng)).collect();
        PredictionLog::from_rows(rows, format!("sampled seed={seed}")).unwrap()
    }

    #[test]
    fn one_row_replays_a_single_high_demand_split() {
        let log = PredictionLog::from_rows(vec![(true, true, Demand::High)], "one row").unwrap();
        let game = empirical_game(&log, PayoffParams::new(0.2, 2.0, 1.0).unwrap()).unwrap();
        let s = Strategy::DISCRIMINATING;
        assert_eq!(game.utility(s, s), (1.0, 1.0));
        assert_eq!(game.std_error(s, s), (0.0, 0.0));
        assert!(game.bne.is_bne);
        // Prediction-1 branches are observed; prediction-0 branches never
        // occur in this log.
        assert!(game.bne.slacks[0].unwrap() > 0.0);
        assert!(game.bne.slacks[1].is_none());
        assert!(game.bne.slacks[2].unwrap() > 0.0);
        assert!(game.bne.slacks[3].is_none());
    }

    #[test]
    fn matches_the_model_utilities_on_a_sampled_log() {
        let p = MarketParams::new(0.6, 0.85, 0.75, 0.3, 0.4, 4.0, 1.0).unwrap();
        let log = sampled_log(&p, 100_000, 5);
        let game = empirical_game(&log, PayoffParams::new(0.3, 4.0, 1.0).unwrap()).unwrap();
        for &s1 in &Strategy::ALL {
            for &s2 in &Strategy::ALL {
                let profile = StrategyProfile::new(s1, s2);
                let (m1, m2) = game.utility(s1, s2);
                let (se1, se2) = game.std_error(s1, s2);
                let u1 = expected_utility(Firm::One, profile, &p).unwrap();
                let u2 = expected_utility(Firm::Two, profile, &p).unwrap();
                assert!(
                    (m1 - u1).abs() <= 4.0 * se1 && (m2 - u2).abs() <= 4.0 * se2,
                    "{}/{}: ({m1}, {m2}) vs ({u1}, {u2})",
                    s1.label(),
                    s2.label()
                );
            }
        }
        assert_eq!(game.bne.is_bne, is_discriminating_bne(&p).unwrap().is_bne);
    }

    #[test]
    fn lockstep_predictions_support_discrimination() {
        let mut rows = Vec::new();
        for (demand, correct) in [(Demand::High, true), (Demand::Low, false)] {
            rows.extend(std::iter::repeat_n((correct, correct, demand), 80));
            rows.extend(std::iter::repeat_n((!correct, !correct, demand), 20));
        }
        let log = PredictionLog::from_rows(rows, "lockstep").unwrap();
        let game = empirical_game(&log, PayoffParams::new(0.1, 5.0, 1.0).unwrap()).unwrap();
        assert!(game.bne.is_bne);
        assert!(game.bne.min_slack().unwrap() > 0.0);
        let s = Strategy::DISCRIMINATING;
        let (on_path, _) = game.utility(s, s);
        assert!(on_path > game.utility(Strategy::ALWAYS_LOW, s).0);
        assert!(on_path > game.utility(Strategy::ALWAYS_HIGH, s).0);
    }

    #[test]
    fn errors_shrink_as_the_log_grows() {
        let p = MarketParams::new(0.6, 0.85, 0.75, 0.3, 0.4, 4.0, 1.0).unwrap();
        let params = PayoffParams::new(0.3, 4.0, 1.0).unwrap();
        let worst_error = |draws: usize| -> (f64, f64) {
            let game = empirical_game(&sampled_log(&p, draws, 23), params).unwrap();
            let mut worst = 0.0f64;
            let mut worst_se = 0.0f64;
            for &s1 in &Strategy::ALL {
                for &s2 in &Strategy::ALL {
                    let profile = StrategyProfile::new(s1, s2);
                    let (m1, m2) = game.utility(s1, s2);
                    let (se1, se2) = game.std_error(s1, s2);
                    let u1 = expected_utility(Firm::One, profile, &p).unwrap();
                    let u2 = expected_utility(Firm::Two, profile, &p).unwrap();
                    worst = worst.max((m1 - u1).abs()).max((m2 - u2).abs());
                    worst_se = worst_se.max(se1).max(se2);
                }
            }
            (worst, worst_se)
        };
        let (err_small, se_small) = worst_error(10_000);
        let (err_mid, se_mid) = worst_error(100_000);
        let (err_large, se_large) = worst_error(1_000_000);
        assert!(err_mid < err_small, "{err_mid} vs {err_small}");
        assert!(err_large < err_mid, "{err_large} vs {err_mid}");
        assert!(se_mid < se_small && se_large < se_mid);
    }

    #[test]
    fn rejects_invalid_payoff_parameters() {
        assert!(PayoffParams::new(0.6, 2.0, 1.0).is_err());
        assert!(PayoffParams::new(0.2, 1.0, 2.0).is_err());
        assert!(PayoffParams::new(0.2, 2.0, 0.0).is_err());
    }
}
