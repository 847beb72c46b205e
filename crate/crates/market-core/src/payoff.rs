use crate::params::{LoyaltyParams, MarketParams, WelfareParams};

/// Consumer demand state: High values the good at or above the high retail
/// price, Low below it (but at or above the low price).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Demand {
    Low,
    High,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Price {
    Low,
    High,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Firm {
    One,
    Two,
}

impl Firm {
    pub fn index(self) -> usize {
        match self {
            Firm::One => 1,
            Firm::Two => 2,
        }
    }

    pub fn other(self) -> Firm {
        match self {
            Firm::One => Firm::Two,
            Firm::Two => Firm::One,
        }
    }
}

/// Expected payoff of `firm` when prices `(p1, p2)` are posted and the
/// consumer's demand state is `demand`. High-demand consumers split evenly
/// on equal prices and buy Low with probability 1−σ on a split; low-demand
/// consumers only ever pay the Low price.
pub fn payoff(firm: Firm, prices: (Price, Price), demand: Demand, p: &MarketParams) -> f64 {
    let (own, other) = match firm {
        Firm::One => (prices.0, prices.1),
        Firm::Two => (prices.1, prices.0),
    };
    match demand {
        Demand::High => match (own, other) {
            (Price::High, Price::High) => p.h / 2.0,
            (Price::High, Price::Low) => p.sigma * p.h,
            (Price::Low, Price::High) => (1.0 - p.sigma) * p.l,
            (Price::Low, Price::Low) => p.l / 2.0,
        },
        Demand::Low => match (own, other) {
            (Price::High, _) => 0.0,
            (Price::Low, Price::High) => p.l,
            (Price::Low, Price::Low) => p.l / 2.0,
        },
    }
}

/// Brand-loyalty variant: a γ share of consumers defaults to firm 1, the
/// rest to firm 2, and a loyal high-demand consumer facing a High price at
/// their own firm switches to a cheaper rival with probability 1−σ_loyal.
pub fn payoff_loyal(firm: Firm, prices: (Price, Price), demand: Demand, lp: &LoyaltyParams) -> f64 {
    let g = lp.gamma;
    let s = lp.sigma_loyal;
    let h = lp.base.h;
    let l = lp.base.l;
    match demand {
        Demand::High => match (firm, prices.0, prices.1) {
            (Firm::One, Price::High, Price::High) => g * h,
            (Firm::One, Price::High, Price::Low) => g * s * h,
            (Firm::One, Price::Low, Price::High) => (1.0 - s + g * s) * l,
            (Firm::One, Price::Low, Price::Low) => g * l,
            (Firm::Two, Price::High, Price::High) => (1.0 - g) * h,
            (Firm::Two, Price::High, Price::Low) => (1.0 - g * s) * l,
            (Firm::Two, Price::Low, Price::High) => (1.0 - g) * s * h,
            (Firm::Two, Price::Low, Price::Low) => (1.0 - g) * l,
        },
        Demand::Low => match (firm, prices.0, prices.1) {
            (_, Price::High, Price::High) => 0.0,
            (Firm::One, Price::High, Price::Low) => 0.0,
            (Firm::Two, Price::High, Price::Low) => l,
            (Firm::One, Price::Low, Price::High) => l,
            (Firm::Two, Price::Low, Price::High) => 0.0,
            (Firm::One, Price::Low, Price::Low) => g * l,
            (Firm::Two, Price::Low, Price::Low) => (1.0 - g) * l,
        },
    }
}

/// Consumer welfare for one price pair and demand state. A high-demand
/// consumer gains the retail-price gap when buying Low (in full on (L,L),
/// with probability 1−σ on a split); low-demand consumers gain δ_L whenever
/// some firm posts Low.
pub fn welfare_cell(prices: (Price, Price), demand: Demand, sigma: f64, w: &WelfareParams) -> f64 {
    let gap = w.price_h - w.price_l;
    match demand {
        Demand::High => match prices {
            (Price::High, Price::High) => w.delta_h,
            (Price::High, Price::Low) | (Price::Low, Price::High) => {
                w.delta_h + (1.0 - sigma) * gap
            }
            (Price::Low, Price::Low) => w.delta_h + gap,
        },
        Demand::Low => match prices {
            (Price::High, Price::High) => 0.0,
            _ => w.delta_l,
        },
    }
}
