use crate::error::{check_range, MarketError};

/// Parameters of the one-shot duopoly pricing game.
///
/// `theta` is the fraction of high-valuation consumers, `a1`/`a2` the firms'
/// prediction accuracies (equal true-positive and true-negative rates),
/// `sigma` the chance a high-valuation consumer still buys at the High price
/// when the other firm offers Low, `rho` the error correlation between the
/// two predictors, and `h`/`l` the two price levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarketParams {
    pub theta: f64,
    pub a1: f64,
    pub a2: f64,
    pub sigma: f64,
    pub rho: f64,
    pub h: f64,
    pub l: f64,
}

impl MarketParams {
    pub fn new(
        theta: f64,
        a1: f64,
        a2: f64,
        sigma: f64,
        rho: f64,
        h: f64,
        l: f64,
    ) -> Result<Self, MarketError> {
        let p = Self {
            theta,
            a1,
            a2,
            sigma,
            rho,
            h,
            l,
        };
        p.validate()?;
        Ok(p)
    }

    /// Both firms share the same accuracy `a`.
    pub fn symmetric(
        theta: f64,
        a: f64,
        sigma: f64,
        rho: f64,
        h: f64,
        l: f64,
    ) -> Result<Self, MarketError> {
        Self::new(theta, a, a, sigma, rho, h, l)
    }

    pub fn validate(&self) -> Result<(), MarketError> {
        check_range("theta", self.theta, 0.0, 1.0, "0 <= theta <= 1")?;
        check_range("a1", self.a1, 0.5, 1.0, "0.5 <= a1 <= 1")?;
        check_range("a2", self.a2, 0.5, 1.0, "0.5 <= a2 <= 1")?;
        check_range("sigma", self.sigma, 0.0, 0.5, "0 <= sigma <= 0.5")?;
        check_range("rho", self.rho, 0.0, 1.0, "0 <= rho <= 1")?;
        if !(self.l.is_finite() && self.l > 0.0) {
            return Err(MarketError::InvalidParameter {
                name: "l",
                value: self.l,
                constraint: "l > 0",
            });
        }
        if !(self.h.is_finite() && self.h > self.l) {
            return Err(MarketError::InvalidParameter {
                name: "h",
                value: self.h,
                constraint: "h > l",
            });
        }
        Ok(())
    }

    /// The term A = min(a1,a2) − a1·a2 scaling how much room the marginals
    /// leave for prediction correlation.
    pub fn correlation_capacity(&self) -> f64 {
        self.a1.min(self.a2) - self.a1 * self.a2
    }

    /// Same market with a different correlation.
    pub fn with_rho(&self, rho: f64) -> Self {
        Self { rho, ..*self }
    }

    pub fn price_ratio(&self) -> f64 {
        self.h / self.l
    }
}

/// Consumer-side welfare inputs: retail prices and the outside-option
/// surpluses for each demand type. Defaults mirror the firm prices with
/// zero base surplus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WelfareParams {
    pub delta_h: f64,
    pub delta_l: f64,
    pub price_h: f64,
    pub price_l: f64,
}

impl WelfareParams {
    pub fn new(
        delta_h: f64,
        delta_l: f64,
        price_h: f64,
        price_l: f64,
    ) -> Result<Self, MarketError> {
        let w = Self {
            delta_h,
            delta_l,
            price_h,
            price_l,
        };
        w.validate()?;
        Ok(w)
    }

    /// Retail prices equal to the firms' price levels, zero base surplus.
    pub fn for_market(p: &MarketParams) -> Self {
        Self {
            delta_h: 0.0,
            delta_l: 0.0,
            price_h: p.h,
            price_l: p.l,
        }
    }

    pub fn validate(&self) -> Result<(), MarketError> {
        if !(self.delta_h.is_finite() && self.delta_h >= 0.0) {
            return Err(MarketError::InvalidParameter {
                name: "delta_h",
                value: self.delta_h,
                constraint: "delta_h >= 0",
            });
        }
        if !(self.delta_l.is_finite() && self.delta_l >= 0.0) {
            return Err(MarketError::InvalidParameter {
                name: "delta_l",
                value: self.delta_l,
                constraint: "delta_l >= 0",
            });
        }
        if !self.price_l.is_finite() || !self.price_h.is_finite() || self.price_h <= self.price_l {
            return Err(MarketError::InvalidParameter {
                name: "price_h",
                value: self.price_h,
                constraint: "price_h > price_l",
            });
        }
        Ok(())
    }
}

/// Parameters of the brand-loyalty variant. A `gamma` share of consumers is
/// loyal to firm 1, the rest to firm 2, and `sigma_loyal` (range [0,1])
/// replaces the duopoly `sigma`: `base.sigma` is ignored by the loyalty
/// payoffs, so callers normally leave it at 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoyaltyParams {
    pub base: MarketParams,
    pub gamma: f64,
    pub sigma_loyal: f64,
}

impl LoyaltyParams {
    pub fn new(base: MarketParams, gamma: f64, sigma_loyal: f64) -> Result<Self, MarketError> {
        let lp = Self {
            base,
            gamma,
            sigma_loyal,
        };
        lp.validate()?;
        Ok(lp)
    }

    pub fn validate(&self) -> Result<(), MarketError> {
        self.base.validate()?;
        check_range("gamma", self.gamma, 0.0, 1.0, "0 <= gamma <= 1")?;
        check_range(
            "sigma_loyal",
            self.sigma_loyal,
            0.0,
            1.0,
            "0 <= sigma_loyal <= 1",
        )
    }
}
