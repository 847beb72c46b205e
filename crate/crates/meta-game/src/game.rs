use crate::MetaError;
use market_core::{expected_utility, is_discriminating_bne, Firm, MarketParams, StrategyProfile};

/// Market environment shared by every cell of the meta-game: the demand
/// prior, price sensitivity, and the two price levels. Accuracies and the
/// error correlation vary cell by cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarketBase {
    pub theta: f64,
    pub sigma: f64,
    pub h: f64,
    pub l: f64,
}

impl MarketBase {
    pub fn new(theta: f64, sigma: f64, h: f64, l: f64) -> Self {
        MarketBase { theta, sigma, h, l }
    }
}

/// One firm's data-source choice in the first stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    /// Buy the shared vendor model: accuracy `a_c`, correlated at `rho_c`
    /// when the rival buys it too.
    Correlated,
    /// Train on own data: accuracy `a_i`, errors independent of the rival.
    Independent,
}

impl Source {
    pub fn index(self) -> usize {
        match self {
            Source::Correlated => 0,
            Source::Independent => 1,
        }
    }
}

/// The two-by-two game over data sources.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetaGame {
    pub a_c: f64,
    pub a_i: f64,
    pub rho_c: f64,
    pub market: MarketBase,
}

impl MetaGame {
    pub fn new(a_c: f64, a_i: f64, rho_c: f64, market: MarketBase) -> Result<Self, MetaError> {
        let g = MetaGame {
            a_c,
            a_i,
            rho_c,
            market,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<(), MetaError> {
        if !(self.rho_c > 0.0) {
            return Err(MetaError::NonPositiveRhoC(self.rho_c));
        }
        self.cell(self.a_c, self.a_c, self.rho_c)?;
        self.cell(self.a_i, self.a_i, 0.0)?;
        Ok(())
    }

    pub fn accuracy(&self, source: Source) -> f64 {
        match source {
            Source::Correlated => self.a_c,
            Source::Independent => self.a_i,
        }
    }

    /// Downstream market induced by a pair of source choices. Correlation
    /// applies only when both firms buy the shared model.
    pub fn induced_market(&self, s1: Source, s2: Source) -> Result<MarketParams, MetaError> {
        let rho = match (s1, s2) {
            (Source::Correlated, Source::Correlated) => self.rho_c,
            _ => 0.0,
        };
        self.cell(self.accuracy(s1), self.accuracy(s2), rho)
    }

    fn cell(&self, a1: f64, a2: f64, rho: f64) -> Result<MarketParams, MetaError> {
        let m = &self.market;
        Ok(MarketParams::new(m.theta, a1, a2, m.sigma, rho, m.h, m.l)?)
    }
}

/// Equilibrium summary of the source-choice game.
///
/// `payoffs[i][j]` holds both firms' downstream equilibrium utilities when
/// firm 1 picks the source with index `i` and firm 2 the one with index `j`
/// (0 = correlated, 1 = independent). A cell is "valid" when discriminating
/// pricing is an equilibrium of the market it induces; a source profile only
/// counts as a pure Nash equilibrium if its own cell is valid and no firm
/// gains by switching source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetaOutcome {
    pub payoffs: [[(f64, f64); 2]; 2],
    pub valid_corr: bool,
    pub valid_ind: bool,
    pub valid_mixed: bool,
    pub corr_is_pne: bool,
    pub ind_is_pne: bool,
    /// Worst deviation margin from (correlated, correlated), over both firms.
    pub corr_slack: f64,
    /// Worst deviation margin from (independent, independent), over both firms.
    pub ind_slack: f64,
    /// Firm utility under both-correlated minus both-independent.
    pub corr_minus_ind: f64,
}

impl MetaOutcome {
    pub fn cell(&self, s1: Source, s2: Source) -> (f64, f64) {
        self.payoffs[s1.index()][s2.index()]
    }
}

/// Evaluate all four source profiles of `g` through the downstream pricing
/// game and classify the pure equilibria of the resulting 2x2 game.
pub fn meta_payoffs(g: &MetaGame) -> Result<MetaOutcome, MetaError> {
    g.validate()?;
    let eval = |s1: Source, s2: Source| -> Result<((f64, f64), bool), MetaError> {
        let p = g.induced_market(s1, s2)?;
        let u1 = expected_utility(Firm::One, StrategyProfile::DISCRIMINATING, &p)?;
        let u2 = expected_utility(Firm::Two, StrategyProfile::DISCRIMINATING, &p)?;
        Ok(((u1, u2), is_discriminating_bne(&p)?.is_bne))
    };
    let (cc, valid_corr) = eval(Source::Correlated, Source::Correlated)?;
    let (ci, valid_ci) = eval(Source::Correlated, Source::Independent)?;
    let (ic, valid_ic) = eval(Source::Independent, Source::Correlated)?;
    let (ii, valid_ind) = eval(Source::Independent, Source::Independent)?;

    let corr_slack = (cc.0 - ic.0).min(cc.1 - ci.1);
    let ind_slack = (ii.0 - ci.0).min(ii.1 - ic.1);
    Ok(MetaOutcome {
        payoffs: [[cc, ci], [ic, ii]],
        valid_corr,
        valid_ind,
        valid_mixed: valid_ci && valid_ic,
        corr_is_pne: valid_corr && corr_slack >= 0.0,
        ind_is_pne: valid_ind && ind_slack >= 0.0,
        corr_slack,
        ind_slack,
        corr_minus_ind: cc.0 - ii.0,
    })
}

pub const DEFAULT_SACRIFICE_TOL: f64 = 1e-6;

/// Largest own-data accuracy `a_i` (located by bisection to within `tol`)
/// at which both-correlated is still a pure Nash equilibrium that pays
/// strictly more than both-independent. Returns `NoSacrifice` when that
/// already fails at `a_i = a_c`, which happens whenever sensitivity sits at
/// or above the preference threshold.
pub fn max_sacrifice(a_c: f64, rho_c: f64, market: MarketBase, tol: f64) -> Result<f64, MetaError> {
    assert!(tol.is_finite() && tol > 0.0, "tolerance must be positive");
    let prefers_correlation = |a_i: f64| -> Result<bool, MetaError> {
        let out = meta_payoffs(&MetaGame {
            a_c,
            a_i,
            rho_c,
            market,
        })?;
        Ok(out.corr_is_pne && out.corr_minus_ind > 0.0)
    };
    if !prefers_correlation(a_c)? {
        return Err(MetaError::NoSacrifice { a_c });
    }
    if prefers_correlation(1.0)? {
        return Ok(1.0);
    }
    let (mut lo, mut hi) = (a_c, 1.0);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if prefers_correlation(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}
