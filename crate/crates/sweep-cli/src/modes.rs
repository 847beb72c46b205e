//! Column schemas and row evaluators, one set per mode.
//!
//! The column list is a pure function of the mode: fixed parameters are
//! repeated on every row so a CSV stands on its own without the config
//! that produced it. Cells that are undefined at a point (a slack whose
//! conditioning event has zero probability, a utility gap where one of
//! the equilibria fails) are left empty rather than faked with sentinels.

use analysis::classify_region;
use copula::{copula_joint_prob, polychoric_to_gaussian, CopulaSpec, Integration, POLYCHORIC_TOL};
use empirical_io::{empirical_game, estimate_params, load_log, PayoffParams};
use market_core::{
    expected_utility_loyal, is_discriminating_bne_loyal, joint_distribution, Demand, Firm,
    LoyaltyParams, MarketParams, Strategy, StrategyProfile, WelfareParams,
};
use meta_game::{
    max_sacrifice, meta_payoffs, simulate_weaker, MarketBase, MetaError, MetaGame, Source,
    DEFAULT_SACRIFICE_TOL,
};
use nfirm::{coalition_stable, role_utilities, second_stage_bne, CoalitionConfig, Stability};

use crate::config::{Mode, SweepConfig};

/// One CSV column: its header name and a one-line description for the
/// generated schema file.
#[derive(Debug, Clone, Copy)]
pub struct ColumnDoc {
    pub name: &'static str,
    pub desc: &'static str,
}

const fn col(name: &'static str, desc: &'static str) -> ColumnDoc {
    ColumnDoc { name, desc }
}

const DUOPOLY_COLUMNS: &[ColumnDoc] = &[
    col("theta", "fraction of high-valuation consumers"),
    col("a", "prediction accuracy shared by both firms"),
    col("sigma", "chance a high-valuation consumer still buys at the High price when the rival offers Low"),
    col("h", "high price"),
    col("l", "low price"),
    col("bne_rho0", "discriminating pricing is an equilibrium with independent predictors"),
    col("bne_rho1", "discriminating pricing is an equilibrium with identical predictors"),
    col("min_slack_rho0", "worst follow-versus-deviate margin at rho = 0; empty when every branch has zero probability"),
    col("min_slack_rho1", "worst follow-versus-deviate margin at rho = 1; empty when every branch has zero probability"),
    col("utility_diff", "firm utility at rho = 1 minus at rho = 0; empty unless both equilibria hold"),
    col("welfare_diff", "consumer welfare at rho = 1 minus at rho = 0; empty unless both equilibria hold"),
    col("region", "none | rho0-only | rho1-only | both"),
];

const META_GAME_COLUMNS: &[ColumnDoc] = &[
    col("a_c", "accuracy of the shared-source predictor"),
    col("a_i", "accuracy of the own-data predictor"),
    col("rho_c", "error correlation when both firms buy the shared source"),
    col("theta", "fraction of high-valuation consumers"),
    col("sigma", "chance a high-valuation consumer still buys at the High price when the rival offers Low"),
    col("h", "high price"),
    col("l", "low price"),
    col("u_cc_1", "firm 1 utility when both buy the shared source"),
    col("u_cc_2", "firm 2 utility when both buy the shared source"),
    col("u_ci_1", "firm 1 utility when firm 1 buys and firm 2 self-builds"),
    col("u_ci_2", "firm 2 utility when firm 1 buys and firm 2 self-builds"),
    col("u_ic_1", "firm 1 utility when firm 1 self-builds and firm 2 buys"),
    col("u_ic_2", "firm 2 utility when firm 1 self-builds and firm 2 buys"),
    col("u_ii_1", "firm 1 utility when both self-build"),
    col("u_ii_2", "firm 2 utility when both self-build"),
    col("valid_corr", "discriminating pricing holds in the both-correlated market"),
    col("valid_ind", "discriminating pricing holds in the both-independent market"),
    col("valid_mixed", "discriminating pricing holds in both mixed markets"),
    col("corr_is_pne", "neither firm gains by deviating from both-correlated"),
    col("ind_is_pne", "neither firm gains by deviating from both-independent"),
    col("corr_slack", "worst deviation margin from both-correlated"),
    col("ind_slack", "worst deviation margin from both-independent"),
    col("corr_minus_ind", "firm utility under both-correlated minus both-independent"),
    col("max_sacrifice", "largest own-data accuracy at which both-correlated still beats both-independent as an equilibrium; empty when none exists"),
    col("q", "mixture weight that makes an own-data predictor mimic the shared one"),
    col("mix_high_given_high", "simulated share of High prices under high demand"),
    col("mix_high_given_low", "simulated share of High prices under low demand"),
    col("mix_se_high", "binomial standard error of mix_high_given_high"),
    col("mix_se_low", "binomial standard error of mix_high_given_low"),
    col("draws", "simulation draws per demand state"),
];

const META_REGION_COLUMNS: &[ColumnDoc] = &[
    col("a_c", "accuracy of the shared-source predictor"),
    col("a_i", "accuracy of the own-data predictor"),
    col(
        "rho_c",
        "error correlation when both firms buy the shared source",
    ),
    col("theta", "fraction of high-valuation consumers"),
    col(
        "sigma",
        "chance a high-valuation consumer still buys at the High price when the rival offers Low",
    ),
    col("h", "high price"),
    col("l", "low price"),
    col(
        "defined",
        "a_c <= a_i, so the source game is well posed; remaining cells are empty otherwise",
    ),
    col(
        "valid_corr",
        "discriminating pricing holds in the both-correlated market",
    ),
    col(
        "valid_ind",
        "discriminating pricing holds in the both-independent market",
    ),
    col(
        "valid_mixed",
        "discriminating pricing holds in both mixed markets",
    ),
    col(
        "corr_is_pne",
        "neither firm gains by deviating from both-correlated",
    ),
    col(
        "ind_is_pne",
        "neither firm gains by deviating from both-independent",
    ),
    col("both_pne", "both source profiles are equilibria"),
    col("corr_slack", "worst deviation margin from both-correlated"),
    col("ind_slack", "worst deviation margin from both-independent"),
    col(
        "corr_minus_ind",
        "firm utility under both-correlated minus both-independent",
    ),
];

const LOYALTY_COLUMNS: &[ColumnDoc] = &[
    col("gamma", "share of consumers loyal to firm 1"),
    col("sigma", "chance a consumer buys from their firm at the High price anyway"),
    col("theta", "fraction of high-valuation consumers"),
    col("a", "prediction accuracy shared by both firms"),
    col("h", "high price"),
    col("l", "low price"),
    col("bne_rho0", "discriminating pricing is an equilibrium with independent predictors"),
    col("bne_rho1", "discriminating pricing is an equilibrium with identical predictors"),
    col("min_slack_rho0", "worst follow-versus-deviate margin at rho = 0; empty when every branch has zero probability"),
    col("min_slack_rho1", "worst follow-versus-deviate margin at rho = 1; empty when every branch has zero probability"),
    col("u1_diff", "firm 1 utility at rho = 1 minus at rho = 0; empty unless both equilibria hold"),
    col("u2_diff", "firm 2 utility at rho = 1 minus at rho = 0; empty unless both equilibria hold"),
    col("both_prefer_rho1", "both firms gain from identical predictors; empty unless both equilibria hold"),
    col("region", "none | rho0-only | rho1-only | both"),
];

const NFIRM_COLUMNS: &[ColumnDoc] = &[
    col("n", "number of firms"),
    col("k", "coalition size (firms sharing one predictor)"),
    col("a", "prediction accuracy of every firm"),
    col("theta", "fraction of high-valuation consumers"),
    col(
        "sigma",
        "chance a high-valuation consumer still buys at the High price when some rival offers Low",
    ),
    col("h", "high price"),
    col("l", "low price"),
    col(
        "is_bne",
        "discriminating pricing is an equilibrium of the pricing stage at this k",
    ),
    col(
        "min_slack",
        "worst follow-versus-deviate margin across firms and predictions",
    ),
    col(
        "u_coalition",
        "expected utility of a coalition member; empty when k = 0",
    ),
    col(
        "u_independent",
        "expected utility of an independent firm; empty when k = n",
    ),
    col(
        "join_slack",
        "gain an independent forgoes by joining; empty when k = n",
    ),
    col(
        "leave_slack",
        "gain a member forgoes by leaving; empty when k = 0",
    ),
    col(
        "valid_at_k",
        "pricing stage sustains discrimination at k itself",
    ),
    col(
        "neighbors_valid",
        "pricing stage also holds in the worlds one switcher would create",
    ),
    col(
        "stability",
        "stable | unstable | invalid-region, judged at k alone",
    ),
    col(
        "stability_strict",
        "same, but deviation worlds must sustain discriminating pricing too",
    ),
];

const COPULA_COLUMNS: &[ColumnDoc] = &[
    col("tau", "demand state the cell conditions on (high | low)"),
    col("p1", "firm 1 prediction (1 = high demand predicted)"),
    col("p2", "firm 2 prediction (1 = high demand predicted)"),
    col(
        "exact",
        "closed-form conditional probability of this prediction pair",
    ),
    col(
        "estimate",
        "quasi-Monte Carlo orthant estimate under the Gaussian copula",
    ),
    col(
        "std_error",
        "replicate-based standard error of the estimate",
    ),
    col(
        "z",
        "(estimate - exact) / std_error; empty when std_error is 0",
    ),
    col(
        "latent_rho",
        "Gaussian correlation matched to the requested binary correlation",
    ),
    col("samples", "quasi-Monte Carlo samples per cell"),
];

const EMPIRICAL_COLUMNS: &[ColumnDoc] = &[
    col("s1", "firm 1 strategy: prices on prediction 0 and 1 (L or H)"),
    col("s2", "firm 2 strategy: prices on prediction 0 and 1 (L or H)"),
    col("u1", "mean firm 1 payoff over the log under (s1, s2)"),
    col("u2", "mean firm 2 payoff over the log under (s1, s2)"),
    col("se1", "standard error of u1"),
    col("se2", "standard error of u2"),
    col("rows", "log rows the means average over"),
    col("a1_hat", "estimated firm 1 accuracy"),
    col("a1_se", "standard error of a1_hat"),
    col("a2_hat", "estimated firm 2 accuracy"),
    col("a2_se", "standard error of a2_hat"),
    col("theta_hat", "estimated fraction of high-valuation consumers"),
    col("theta_se", "standard error of theta_hat"),
    col("rho_raw", "error-correlation estimate before projection onto [0, 1]"),
    col("rho_hat", "error-correlation estimate projected onto [0, 1]"),
    col("rho_se", "standard error of the correlation estimate"),
    col("is_bne", "discriminating pricing is an equilibrium under the replayed payoffs"),
    col("disc_min_slack", "worst follow-versus-deviate margin under the replayed payoffs; empty when every branch is unobserved"),
];

pub fn columns(mode: Mode) -> &'static [ColumnDoc] {
    match mode {
        Mode::DuopolyRegion => DUOPOLY_COLUMNS,
        Mode::MetaGame => META_GAME_COLUMNS,
        Mode::MetaRegion => META_REGION_COLUMNS,
        Mode::LoyaltyRegion => LOYALTY_COLUMNS,
        Mode::NfirmRegion => NFIRM_COLUMNS,
        Mode::CopulaCheck => COPULA_COLUMNS,
        Mode::Empirical => EMPIRICAL_COLUMNS,
    }
}

/// Fixed parameters overlaid with one grid point's axis values.
pub(crate) struct Point<'a> {
    cfg: &'a SweepConfig,
    axis_values: &'a [f64],
}

impl<'a> Point<'a> {
    pub(crate) fn new(cfg: &'a SweepConfig, axis_values: &'a [f64]) -> Self {
        Point { cfg, axis_values }
    }

    fn num(&self, name: &str) -> f64 {
        if let Some(i) = self.cfg.axes.iter().position(|a| a.name == name) {
            return self.axis_values[i];
        }
        self.cfg
            .number(name)
            .unwrap_or_else(|| panic!("validated config is missing {name}"))
    }
}

fn fnum(x: f64) -> String {
    format!("{x}")
}

fn fopt(x: Option<f64>) -> String {
    x.map(fnum).unwrap_or_default()
}

fn fbool(b: bool) -> String {
    b.to_string()
}

fn region_label(at_rho0: bool, at_rho1: bool) -> &'static str {
    match (at_rho0, at_rho1) {
        (false, false) => "none",
        (true, false) => "rho0-only",
        (false, true) => "rho1-only",
        (true, true) => "both",
    }
}

fn stability_label(s: Stability) -> &'static str {
    match s {
        Stability::Stable => "stable",
        Stability::Unstable => "unstable",
        Stability::InvalidRegion => "invalid-region",
    }
}

type RowResult = Result<Vec<String>, String>;

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Evaluate one grid point of a grid mode.
pub(crate) fn grid_row(point: &Point<'_>) -> RowResult {
    match point.cfg.mode {
        Mode::DuopolyRegion => duopoly_row(point),
        Mode::MetaRegion => meta_region_row(point),
        Mode::LoyaltyRegion => loyalty_row(point),
        Mode::NfirmRegion => nfirm_row(point),
        mode => unreachable!("{mode} is not a grid mode"),
    }
}

fn duopoly_row(pt: &Point<'_>) -> RowResult {
    let (theta, a, sigma) = (pt.num("theta"), pt.num("a"), pt.num("sigma"));
    let (h, l) = (pt.num("h"), pt.num("l"));
    let p = MarketParams::symmetric(theta, a, sigma, 0.0, h, l).map_err(err)?;
    let w = WelfareParams::for_market(&p);
    let rc = classify_region(&p, &w).map_err(err)?;
    Ok(vec![
        fnum(theta),
        fnum(a),
        fnum(sigma),
        fnum(h),
        fnum(l),
        fbool(rc.bne_at_rho0),
        fbool(rc.bne_at_rho1),
        fopt(rc.check_rho0.min_slack()),
        fopt(rc.check_rho1.min_slack()),
        fopt(rc.utility_diff),
        fopt(rc.welfare_diff),
        region_label(rc.bne_at_rho0, rc.bne_at_rho1).to_string(),
    ])
}

fn meta_region_row(pt: &Point<'_>) -> RowResult {
    let (a_c, a_i, rho_c) = (pt.num("a_c"), pt.num("a_i"), pt.num("rho_c"));
    let (theta, sigma) = (pt.num("theta"), pt.num("sigma"));
    let (h, l) = (pt.num("h"), pt.num("l"));
    let mut row = vec![
        fnum(a_c),
        fnum(a_i),
        fnum(rho_c),
        fnum(theta),
        fnum(sigma),
        fnum(h),
        fnum(l),
    ];
    if a_c > a_i {
        row.push(fbool(false));
        row.extend(std::iter::repeat_n(String::new(), 9));
        return Ok(row);
    }
    let game = MetaGame::new(a_c, a_i, rho_c, MarketBase::new(theta, sigma, h, l)).map_err(err)?;
    let out = meta_payoffs(&game).map_err(err)?;
    row.push(fbool(true));
    row.push(fbool(out.valid_corr));
    row.push(fbool(out.valid_ind));
    row.push(fbool(out.valid_mixed));
    row.push(fbool(out.corr_is_pne));
    row.push(fbool(out.ind_is_pne));
    row.push(fbool(out.corr_is_pne && out.ind_is_pne));
    row.push(fnum(out.corr_slack));
    row.push(fnum(out.ind_slack));
    row.push(fnum(out.corr_minus_ind));
    Ok(row)
}

fn loyalty_row(pt: &Point<'_>) -> RowResult {
    let (gamma, sigma) = (pt.num("gamma"), pt.num("sigma"));
    let (theta, a) = (pt.num("theta"), pt.num("a"));
    let (h, l) = (pt.num("h"), pt.num("l"));
    let at_rho = |rho: f64| -> Result<LoyaltyParams, String> {
        let base = MarketParams::symmetric(theta, a, 0.0, rho, h, l).map_err(err)?;
        LoyaltyParams::new(base, gamma, sigma).map_err(err)
    };
    let lp0 = at_rho(0.0)?;
    let lp1 = at_rho(1.0)?;
    let c0 = is_discriminating_bne_loyal(&lp0).map_err(err)?;
    let c1 = is_discriminating_bne_loyal(&lp1).map_err(err)?;
    let both = c0.is_bne && c1.is_bne;
    let (u1_diff, u2_diff) = if both {
        let profile = StrategyProfile::DISCRIMINATING;
        let u = |firm, lp| expected_utility_loyal(firm, profile, lp).map_err(err);
        (
            Some(u(Firm::One, &lp1)? - u(Firm::One, &lp0)?),
            Some(u(Firm::Two, &lp1)? - u(Firm::Two, &lp0)?),
        )
    } else {
        (None, None)
    };
    let both_prefer = match (u1_diff, u2_diff) {
        (Some(d1), Some(d2)) => fbool(d1 > 0.0 && d2 > 0.0),
        _ => String::new(),
    };
    Ok(vec![
        fnum(gamma),
        fnum(sigma),
        fnum(theta),
        fnum(a),
        fnum(h),
        fnum(l),
        fbool(c0.is_bne),
        fbool(c1.is_bne),
        fopt(c0.min_slack()),
        fopt(c1.min_slack()),
        fopt(u1_diff),
        fopt(u2_diff),
        both_prefer,
        region_label(c0.is_bne, c1.is_bne).to_string(),
    ])
}

fn nfirm_row(pt: &Point<'_>) -> RowResult {
    let (n, k) = (pt.num("n") as usize, pt.num("k") as usize);
    let (a, theta, sigma) = (pt.num("a"), pt.num("theta"), pt.num("sigma"));
    let (h, l) = (pt.num("h"), pt.num("l"));
    let cfg = CoalitionConfig::new(n, k, a, theta, sigma, h, l).map_err(err)?;
    let bne = second_stage_bne(&cfg).map_err(err)?;
    let (u_coalition, u_independent) = role_utilities(&cfg).map_err(err)?;
    let st = coalition_stable(&cfg).map_err(err)?;
    Ok(vec![
        n.to_string(),
        k.to_string(),
        fnum(a),
        fnum(theta),
        fnum(sigma),
        fnum(h),
        fnum(l),
        fbool(bne.is_bne),
        fnum(bne.min_slack()),
        fopt(u_coalition),
        fopt(u_independent),
        fopt(st.join_slack),
        fopt(st.leave_slack),
        fbool(st.valid_at_k),
        fbool(st.neighbors_valid),
        stability_label(st.stability).to_string(),
        stability_label(st.strict_stability()).to_string(),
    ])
}

/// Evaluate the one-point meta-game mode: the 2x2 source game, the largest
/// accuracy worth sacrificing, and a seeded simulation of the mixture that
/// makes the stronger predictor mimic the weaker one.
pub(crate) fn meta_game_rows(cfg: &SweepConfig) -> Result<Vec<Vec<String>>, String> {
    let get = |name: &str| cfg.number(name).expect("validated config");
    let (a_c, a_i, rho_c) = (get("a_c"), get("a_i"), get("rho_c"));
    let (theta, sigma) = (get("theta"), get("sigma"));
    let (h, l) = (get("h"), get("l"));
    let draws = cfg.count("draws").expect("validated config");
    let seed = cfg.seed.expect("validated config");

    let market = MarketBase::new(theta, sigma, h, l);
    let game = MetaGame::new(a_c, a_i, rho_c, market).map_err(err)?;
    let out = meta_payoffs(&game).map_err(err)?;
    let sacrifice = match max_sacrifice(a_c, rho_c, market, DEFAULT_SACRIFICE_TOL) {
        Ok(boundary) => Some(boundary),
        Err(MetaError::NoSacrifice { .. }) => None,
        Err(e) => return Err(err(e)),
    };
    let mix = simulate_weaker(a_i, a_c, draws, seed).map_err(err)?;

    let (cc1, cc2) = out.cell(Source::Correlated, Source::Correlated);
    let (ci1, ci2) = out.cell(Source::Correlated, Source::Independent);
    let (ic1, ic2) = out.cell(Source::Independent, Source::Correlated);
    let (ii1, ii2) = out.cell(Source::Independent, Source::Independent);
    Ok(vec![vec![
        fnum(a_c),
        fnum(a_i),
        fnum(rho_c),
        fnum(theta),
        fnum(sigma),
        fnum(h),
        fnum(l),
        fnum(cc1),
        fnum(cc2),
        fnum(ci1),
        fnum(ci2),
        fnum(ic1),
        fnum(ic2),
        fnum(ii1),
        fnum(ii2),
        fbool(out.valid_corr),
        fbool(out.valid_ind),
        fbool(out.valid_mixed),
        fbool(out.corr_is_pne),
        fbool(out.ind_is_pne),
        fnum(out.corr_slack),
        fnum(out.ind_slack),
        fnum(out.corr_minus_ind),
        fopt(sacrifice),
        fnum(mix.q),
        fnum(mix.high_given_high),
        fnum(mix.high_given_low),
        fnum(mix.se_given_high),
        fnum(mix.se_given_low),
        draws.to_string(),
    ]])
}

/// Evaluate the copula-check mode: one row per (tau, p1, p2) cell comparing
/// the quasi-Monte Carlo orthant estimate against the closed-form joint
/// prediction distribution at the matched latent correlation.
pub(crate) fn copula_rows(cfg: &SweepConfig) -> Result<Vec<Vec<String>>, String> {
    let a = cfg.number("a").expect("validated config");
    let rho = cfg.number("rho").expect("validated config");
    let samples = cfg.count("samples").expect("validated config");
    let seed = cfg.seed.expect("validated config");

    let latent = polychoric_to_gaussian(rho, a, a, POLYCHORIC_TOL).map_err(err)?;
    let spec = CopulaSpec::new(vec![vec![0, 1]], vec![latent], 0.0, vec![a, a]).map_err(err)?;
    // The closed-form cells condition on tau, so theta and the price
    // parameters are irrelevant; any valid values do.
    let market = MarketParams::symmetric(0.5, a, 0.0, rho, 2.0, 1.0).map_err(err)?;
    let jd = joint_distribution(&market).map_err(err)?;

    let mut rows = Vec::with_capacity(8);
    let mut cell_index = 0u64;
    for tau in [Demand::High, Demand::Low] {
        for p1 in [false, true] {
            for p2 in [false, true] {
                let exact = jd.cell(p1, p2, tau) / jd.demand_prob(tau);
                let est = copula_joint_prob(
                    &[p1, p2],
                    tau,
                    &spec,
                    Integration::QuasiMonteCarlo {
                        samples,
                        seed: seed.wrapping_add(cell_index),
                    },
                )
                .map_err(err)?;
                let z = if est.std_error > 0.0 {
                    fnum((est.estimate - exact) / est.std_error)
                } else {
                    String::new()
                };
                rows.push(vec![
                    match tau {
                        Demand::High => "high".to_string(),
                        Demand::Low => "low".to_string(),
                    },
                    u8::from(p1).to_string(),
                    u8::from(p2).to_string(),
                    fnum(exact),
                    fnum(est.estimate),
                    fnum(est.std_error),
                    z,
                    fnum(latent),
                    samples.to_string(),
                ]);
                cell_index += 1;
            }
        }
    }
    Ok(rows)
}

/// Evaluate the empirical mode: estimates from a prediction log plus the
/// replayed payoff of every strategy pair, one row per pair.
pub(crate) fn empirical_rows(cfg: &SweepConfig) -> Result<Vec<Vec<String>>, String> {
    let path = cfg.text("log").expect("validated config");
    let sigma = cfg.number("sigma").expect("validated config");
    let (h, l) = (
        cfg.number("h").expect("validated config"),
        cfg.number("l").expect("validated config"),
    );

    let log = load_log(path).map_err(err)?;
    let est = estimate_params(&log).map_err(err)?;
    let payoffs = PayoffParams::new(sigma, h, l).map_err(err)?;
    let game = empirical_game(&log, payoffs).map_err(err)?;

    let mut rows = Vec::with_capacity(16);
    for s1 in Strategy::ALL {
        for s2 in Strategy::ALL {
            let (u1, u2) = game.utility(s1, s2);
            let (se1, se2) = game.std_error(s1, s2);
            rows.push(vec![
                s1.label().to_string(),
                s2.label().to_string(),
                fnum(u1),
                fnum(u2),
                fnum(se1),
                fnum(se2),
                log.len().to_string(),
                fnum(est.a1_hat),
                fnum(est.a1_se),
                fnum(est.a2_hat),
                fnum(est.a2_se),
                fnum(est.theta_hat),
                fnum(est.theta_se),
                fnum(est.rho_raw),
                fnum(est.rho_hat),
                fnum(est.rho_se),
                fbool(game.bne.is_bne),
                fopt(game.bne.min_slack()),
            ]);
        }
    }
    Ok(rows)
}
