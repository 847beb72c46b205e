use rand::Rng;

use crate::error::MarketError;
use crate::params::MarketParams;
use crate::payoff::{Demand, Firm};

/// Joint distribution over (p1, p2, τ). Within each demand state the two
/// predictions have marginals a_i (or 1−a_i under τ_L) and co-move through
/// the shared term ρ·A with A = min(a1,a2) − a1·a2; ρ=0 makes them
/// conditionally independent, ρ=1 maximally correlated given the marginals.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    cells: [f64; 8],
}

/// All (p1, p2, τ) outcomes in cell-index order.
pub const OUTCOMES: [(bool, bool, Demand); 8] = [
    (false, false, Demand::Low),
    (false, true, Demand::Low),
    (true, false, Demand::Low),
    (true, true, Demand::Low),
    (false, false, Demand::High),
    (false, true, Demand::High),
    (true, false, Demand::High),
    (true, true, Demand::High),
];

impl JointDistribution {
    fn index(p1: bool, p2: bool, demand: Demand) -> usize {
        let d = matches!(demand, Demand::High) as usize;
        (d << 2) | ((p1 as usize) << 1) | p2 as usize
    }

    pub fn cell(&self, p1: bool, p2: bool, demand: Demand) -> f64 {
        self.cells[Self::index(p1, p2, demand)]
    }

    /// P[p_firm = value].
    pub fn prediction_prob(&self, firm: Firm, value: bool) -> f64 {
        OUTCOMES
            .iter()
            .filter(|(p1, p2, _)| match firm {
                Firm::One => *p1 == value,
                Firm::Two => *p2 == value,
            })
            .map(|&(p1, p2, d)| self.cell(p1, p2, d))
            .sum()
    }

    pub fn demand_prob(&self, demand: Demand) -> f64 {
        OUTCOMES
            .iter()
            .filter(|(_, _, d)| *d == demand)
            .map(|&(p1, p2, d)| self.cell(p1, p2, d))
            .sum()
    }

    /// P[p1 = p2].
    pub fn match_prob(&self) -> f64 {
        OUTCOMES
            .iter()
            .filter(|(p1, p2, _)| p1 == p2)
            .map(|&(p1, p2, d)| self.cell(p1, p2, d))
            .sum()
    }

    /// Expectation of `f` over all outcomes.
    pub fn expectation(&self, mut f: impl FnMut(bool, bool, Demand) -> f64) -> f64 {
        OUTCOMES
            .iter()
            .map(|&(p1, p2, d)| self.cell(p1, p2, d) * f(p1, p2, d))
            .sum()
    }

    /// Draw one (p1, p2, τ) outcome.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (bool, bool, Demand) {
        let mut u: f64 = rng.random();
        for &(p1, p2, d) in &OUTCOMES {
            u -= self.cell(p1, p2, d).max(0.0);
            if u <= 0.0 {
                return (p1, p2, d);
            }
        }
        // Rounding can leave a sliver of mass unassigned; fold it into the
        // last outcome.
        OUTCOMES[7]
    }
}

/// Build the joint distribution of (p1, p2, τ) for the given market.
pub fn joint_distribution(p: &MarketParams) -> Result<JointDistribution, MarketError> {
    p.validate()?;
    let a = p.correlation_capacity();
    let ra = p.rho * a;
    let (a1, a2, t) = (p.a1, p.a2, p.theta);

    let both = a1 * a2 + ra;
    let only1 = a1 * (1.0 - a2) - ra;
    let only2 = (1.0 - a1) * a2 - ra;
    let neither = (1.0 - a1) * (1.0 - a2) + ra;

    let mut cells = [0.0; 8];
    cells[JointDistribution::index(true, true, Demand::High)] = t * both;
    cells[JointDistribution::index(true, false, Demand::High)] = t * only1;
    cells[JointDistribution::index(false, true, Demand::High)] = t * only2;
    cells[JointDistribution::index(false, false, Demand::High)] = t * neither;
    // Under low demand the correct label is 0, so the roles of 1 and 0 swap.
    cells[JointDistribution::index(true, true, Demand::Low)] = (1.0 - t) * neither;
    cells[JointDistribution::index(true, false, Demand::Low)] = (1.0 - t) * only2;
    cells[JointDistribution::index(false, true, Demand::Low)] = (1.0 - t) * only1;
    cells[JointDistribution::index(false, false, Demand::Low)] = (1.0 - t) * both;
    Ok(JointDistribution { cells })
}
