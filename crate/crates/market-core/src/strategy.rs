use crate::payoff::{Firm, Price};

/// A pure second-stage strategy: which price to post for each prediction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Strategy {
    pub on_zero: Price,
    pub on_one: Price,
}

impl Strategy {
    pub const ALWAYS_LOW: Strategy = Strategy {
        on_zero: Price::Low,
        on_one: Price::Low,
    };
    /// The discriminating strategy s*: price High on prediction 1, Low on 0.
    pub const DISCRIMINATING: Strategy = Strategy {
        on_zero: Price::Low,
        on_one: Price::High,
    };
    pub const CONTRARIAN: Strategy = Strategy {
        on_zero: Price::High,
        on_one: Price::Low,
    };
    pub const ALWAYS_HIGH: Strategy = Strategy {
        on_zero: Price::High,
        on_one: Price::High,
    };

    /// All four pure strategies, in (on_zero, on_one) bit order.
    pub const ALL: [Strategy; 4] = [
        Strategy::ALWAYS_LOW,
        Strategy::DISCRIMINATING,
        Strategy::CONTRARIAN,
        Strategy::ALWAYS_HIGH,
    ];

    pub fn price(&self, prediction: bool) -> Price {
        if prediction {
            self.on_one
        } else {
            self.on_zero
        }
    }

    /// Two-letter label: price on prediction 0, price on prediction 1.
    pub fn label(&self) -> &'static str {
        match (self.on_zero, self.on_one) {
            (Price::Low, Price::Low) => "LL",
            (Price::Low, Price::High) => "LH",
            (Price::High, Price::Low) => "HL",
            (Price::High, Price::High) => "HH",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StrategyProfile {
    pub firm1: Strategy,
    pub firm2: Strategy,
}

impl StrategyProfile {
    /// Both firms discriminate: the profile (s*, s*).
    pub const DISCRIMINATING: StrategyProfile = StrategyProfile {
        firm1: Strategy::DISCRIMINATING,
        firm2: Strategy::DISCRIMINATING,
    };

    pub fn new(firm1: Strategy, firm2: Strategy) -> Self {
        Self { firm1, firm2 }
    }

    pub fn strategy(&self, firm: Firm) -> Strategy {
        match firm {
            Firm::One => self.firm1,
            Firm::Two => self.firm2,
        }
    }

    pub fn prices(&self, p1: bool, p2: bool) -> (Price, Price) {
        (self.firm1.price(p1), self.firm2.price(p2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discriminating_prices_high_on_one() {
        assert_eq!(Strategy::DISCRIMINATING.price(true), Price::High);
        assert_eq!(Strategy::DISCRIMINATING.price(false), Price::Low);
        assert_eq!(Strategy::DISCRIMINATING.label(), "LH");
    }

    #[test]
    fn all_strategies_are_distinct() {
        let labels: Vec<_> = Strategy::ALL.iter().map(|s| s.label()).collect();
        assert_eq!(labels, ["LL", "LH", "HL", "HH"]);
    }

    #[test]
    fn profile_resolves_prices_per_prediction() {
        let p = StrategyProfile::new(Strategy::DISCRIMINATING, Strategy::ALWAYS_HIGH);
        assert_eq!(p.prices(false, false), (Price::Low, Price::High));
        assert_eq!(p.prices(true, false), (Price::High, Price::High));
        assert_eq!(p.strategy(Firm::Two), Strategy::ALWAYS_HIGH);
    }
}
