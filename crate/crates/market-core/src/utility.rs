use crate::distribution::{joint_distribution, JointDistribution};
use crate::error::MarketError;
use crate::params::{LoyaltyParams, MarketParams, WelfareParams};
use crate::payoff::{payoff, payoff_loyal, welfare_cell, Demand, Firm, Price};
use crate::strategy::{Strategy, StrategyProfile};

/// Result of checking whether (s*, s*) is an equilibrium. Slacks are the
/// margins by which following the strategy beats the deviation, ordered
/// (firm 1 on prediction 1, firm 1 on prediction 0, firm 2 on prediction 1,
/// firm 2 on prediction 0). A slack is `None` when the conditioning
/// prediction never occurs; that branch is vacuously satisfied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BneCheck {
    pub is_bne: bool,
    pub slacks: [Option<f64>; 4],
}

impl BneCheck {
    /// Smallest margin across the branches that can occur.
    pub fn min_slack(&self) -> Option<f64> {
        self.slacks
            .iter()
            .flatten()
            .copied()
            .fold(None, |acc, s| Some(acc.map_or(s, |m: f64| m.min(s))))
    }
}

fn expected_utility_over(
    jd: &JointDistribution,
    firm: Firm,
    profile: StrategyProfile,
    pay: impl Fn(Firm, (Price, Price), Demand) -> f64,
) -> f64 {
    jd.expectation(|p1, p2, d| pay(firm, profile.prices(p1, p2), d))
}

fn conditional_utility_over(
    jd: &JointDistribution,
    firm: Firm,
    own_price: Price,
    opp_strategy: Strategy,
    own_prediction: bool,
    pay: impl Fn(Firm, (Price, Price), Demand) -> f64,
) -> Result<f64, MarketError> {
    let total = jd.prediction_prob(firm, own_prediction);
    if total <= 0.0 {
        return Err(MarketError::ZeroProbabilityConditioning {
            firm: firm.index(),
            prediction: own_prediction as u8,
        });
    }
    let mass = jd.expectation(|p1, p2, d| {
        let (own_pred, opp_pred) = match firm {
            Firm::One => (p1, p2),
            Firm::Two => (p2, p1),
        };
        if own_pred != own_prediction {
            return 0.0;
        }
        let opp_price = opp_strategy.price(opp_pred);
        let prices = match firm {
            Firm::One => (own_price, opp_price),
            Firm::Two => (opp_price, own_price),
        };
        pay(firm, prices, d)
    });
    Ok(mass / total)
}

fn bne_check_over(
    jd: &JointDistribution,
    pay: impl Fn(Firm, (Price, Price), Demand) -> f64 + Copy,
) -> BneCheck {
    let mut slacks = [None; 4];
    let mut idx = 0;
    for firm in [Firm::One, Firm::Two] {
        for prediction in [true, false] {
            let follow = Strategy::DISCRIMINATING.price(prediction);
            let deviate = match follow {
                Price::High => Price::Low,
                Price::Low => Price::High,
            };
            let opp = Strategy::DISCRIMINATING;
            let on_path = conditional_utility_over(jd, firm, follow, opp, prediction, pay);
            let off_path = conditional_utility_over(jd, firm, deviate, opp, prediction, pay);
            slacks[idx] = match (on_path, off_path) {
                (Ok(u), Ok(v)) => Some(u - v),
                _ => None,
            };
            idx += 1;
        }
    }
    let is_bne = slacks.iter().flatten().all(|s| *s >= 0.0);
    BneCheck { is_bne, slacks }
}

/// Ex-ante expected utility of `firm` when both firms commit to `profile`.
pub fn expected_utility(
    firm: Firm,
    profile: StrategyProfile,
    p: &MarketParams,
) -> Result<f64, MarketError> {
    let jd = joint_distribution(p)?;
    Ok(expected_utility_over(&jd, firm, profile, |f, pr, d| {
        payoff(f, pr, d, p)
    }))
}

/// Expected utility of posting `own_price` given one's own prediction, with
/// the opponent playing `opp_strategy` on theirs.
pub fn conditional_utility(
    firm: Firm,
    own_price: Price,
    opp_strategy: Strategy,
    p: &MarketParams,
    own_prediction: bool,
) -> Result<f64, MarketError> {
    let jd = joint_distribution(p)?;
    conditional_utility_over(
        &jd,
        firm,
        own_price,
        opp_strategy,
        own_prediction,
        |f, pr, d| payoff(f, pr, d, p),
    )
}

/// Check the four interim inequalities that make (s*, s*) an equilibrium:
/// each firm must prefer High on prediction 1 and Low on prediction 0, given
/// the other firm discriminates.
pub fn is_discriminating_bne(p: &MarketParams) -> Result<BneCheck, MarketError> {
    let jd = joint_distribution(p)?;
    Ok(bne_check_over(&jd, |f, pr, d| payoff(f, pr, d, p)))
}

/// Expected consumer welfare under `profile`.
pub fn consumer_welfare(
    p: &MarketParams,
    w: &WelfareParams,
    profile: StrategyProfile,
) -> Result<f64, MarketError> {
    w.validate()?;
    let jd = joint_distribution(p)?;
    Ok(jd.expectation(|p1, p2, d| welfare_cell(profile.prices(p1, p2), d, p.sigma, w)))
}

/// Loyalty-model analogue of `expected_utility`.
pub fn expected_utility_loyal(
    firm: Firm,
    profile: StrategyProfile,
    lp: &LoyaltyParams,
) -> Result<f64, MarketError> {
    lp.validate()?;
    let jd = joint_distribution(&lp.base)?;
    Ok(expected_utility_over(&jd, firm, profile, |f, pr, d| {
        payoff_loyal(f, pr, d, lp)
    }))
}

/// Loyalty-model analogue of `conditional_utility`.
pub fn conditional_utility_loyal(
    firm: Firm,
    own_price: Price,
    opp_strategy: Strategy,
    lp: &LoyaltyParams,
    own_prediction: bool,
) -> Result<f64, MarketError> {
    lp.validate()?;
    let jd = joint_distribution(&lp.base)?;
    conditional_utility_over(
        &jd,
        firm,
        own_price,
        opp_strategy,
        own_prediction,
        |f, pr, d| payoff_loyal(f, pr, d, lp),
    )
}

/// Loyalty-model analogue of `is_discriminating_bne`. The two firms face
/// different payoffs when γ ≠ 0.5, so all four slacks are genuinely distinct.
pub fn is_discriminating_bne_loyal(lp: &LoyaltyParams) -> Result<BneCheck, MarketError> {
    lp.validate()?;
    let jd = joint_distribution(&lp.base)?;
    Ok(bne_check_over(&jd, |f, pr, d| payoff_loyal(f, pr, d, lp)))
}
