use crate::omega::omega_code_prob;
use crate::payoff::price_share;
use crate::{CoalitionConfig, NfirmError};
use market_core::{Demand, Price};

/// Result of the second-stage equilibrium check: does every firm prefer to
/// follow its prediction when all rivals do the same?
#[derive(Debug, Clone, PartialEq)]
pub struct NfirmBne {
    pub is_bne: bool,
    /// Per firm, the margin by which following beats deviating, conditional
    /// on predicting 1 and on predicting 0.
    pub slacks: Vec<(f64, f64)>,
}

impl NfirmBne {
    pub fn min_slack(&self) -> f64 {
        self.slacks
            .iter()
            .map(|(s1, s0)| s1.min(*s0))
            .fold(f64::INFINITY, f64::min)
    }
}

fn prediction(code: u32, firm: usize) -> bool {
    code >> firm & 1 == 1
}

/// Check the 2n interim inequalities for discriminating pricing to be an
/// equilibrium of the pricing stage. Coalition members and independents
/// are each other's mirror images, so the per-firm slacks collapse onto
/// two roles; the collapse itself is asserted.
pub fn second_stage_bne(cfg: &CoalitionConfig) -> Result<NfirmBne, NfirmError> {
    cfg.validate()?;
    let n = cfg.n;
    let mut on = vec![[0.0f64; 2]; n];
    let mut off = vec![[0.0f64; 2]; n];
    let mut mass = vec![[0.0f64; 2]; n];
    for (tau, prior) in [(Demand::High, cfg.theta), (Demand::Low, 1.0 - cfg.theta)] {
        if prior <= 0.0 {
            continue;
        }
        for code in 0u32..1 << n {
            let w = prior * omega_code_prob(code, tau, cfg);
            if w == 0.0 {
                continue;
            }
            let n_high = code.count_ones() as usize;
            for firm in 0..n {
                let (own, flipped, flipped_high) = if prediction(code, firm) {
                    (Price::High, Price::Low, n_high - 1)
                } else {
                    (Price::Low, Price::High, n_high + 1)
                };
                let y = prediction(code, firm) as usize;
                on[firm][y] += w * price_share(own, n_high, tau, cfg);
                off[firm][y] += w * price_share(flipped, flipped_high, tau, cfg);
                mass[firm][y] += w;
            }
        }
    }
    let mut slacks = Vec::with_capacity(n);
    for firm in 0..n {
        for y in [1usize, 0] {
            if mass[firm][y] <= 0.0 {
                return Err(NfirmError::ZeroProbabilityConditioning {
                    firm: firm + 1,
                    prediction: y as u8,
                });
            }
        }
        slacks.push((
            (on[firm][1] - off[firm][1]) / mass[firm][1],
            (on[firm][0] - off[firm][0]) / mass[firm][0],
        ));
    }
    for firm in 1..n {
        let rep = if firm < cfg.k { 0 } else { cfg.k };
        let (s1, s0) = slacks[rep.min(firm)];
        assert!(
            (slacks[firm].0 - s1).abs() < 1e-9 && (slacks[firm].1 - s0).abs() < 1e-9,
            "firms in the same role diverged: {:?} vs {:?}",
            slacks[firm],
            slacks[rep]
        );
    }
    let is_bne = slacks.iter().all(|(s1, s0)| *s1 >= 0.0 && *s0 >= 0.0);
    Ok(NfirmBne { is_bne, slacks })
}

/// Expected utilities (coalition member, independent firm) when everyone
/// prices by the discriminating rule; `None` for a role with no firms.
pub fn role_utilities(cfg: &CoalitionConfig) -> Result<(Option<f64>, Option<f64>), NfirmError> {
    cfg.validate()?;
    let n = cfg.n;
    let mut utilities = vec![0.0f64; n];
    for (tau, prior) in [(Demand::High, cfg.theta), (Demand::Low, 1.0 - cfg.theta)] {
        if prior <= 0.0 {
            continue;
        }
        for code in 0u32..1 << n {
            let w = prior * omega_code_prob(code, tau, cfg);
            if w == 0.0 {
                continue;
            }
            let n_high = code.count_ones() as usize;
            for (firm, u) in utilities.iter_mut().enumerate() {
                let own = if prediction(code, firm) {
                    Price::High
                } else {
                    Price::Low
                };
                *u += w * price_share(own, n_high, tau, cfg);
            }
        }
    }
    let coalition = (cfg.k >= 1).then(|| utilities[0]);
    let independent = (cfg.k < n).then(|| utilities[cfg.k]);
    Ok((coalition, independent))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    Stable,
    Unstable,
    /// Discriminating pricing is not an equilibrium of the pricing stage,
    /// so the coalition question does not arise.
    InvalidRegion,
}

/// First-stage classification of a size-k coalition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityOutcome {
    pub stability: Stability,
    /// Gain an independent firm forgoes by joining: V_I(k) − V_C(k+1).
    /// `None` when everyone is already in the coalition.
    pub join_slack: Option<f64>,
    /// Gain a member forgoes by leaving: V_C(k) − V_I(k−1). `None` when
    /// the coalition is empty.
    pub leave_slack: Option<f64>,
    /// Whether the pricing stage sustains discrimination at k itself.
    pub valid_at_k: bool,
    /// Whether it also does in the worlds a single switcher would create.
    pub neighbors_valid: bool,
}

impl StabilityOutcome {
    /// Classification under the stricter reading that the deviation worlds
    /// must sustain discriminating pricing too.
    pub fn strict_stability(&self) -> Stability {
        if self.neighbors_valid {
            self.stability
        } else {
            Stability::InvalidRegion
        }
    }
}

/// Is a coalition of size k stable against a single firm switching sides?
/// Joining must not pay for independents and leaving must not pay for
/// members; the utilities a switcher compares live in the k+1 or k−1
/// world. Regions where the pricing stage itself breaks down are flagged
/// rather than classified.
pub fn coalition_stable(cfg: &CoalitionConfig) -> Result<StabilityOutcome, NfirmError> {
    cfg.validate()?;
    let valid_at_k = second_stage_bne(cfg)?.is_bne;
    let (v_coalition, v_independent) = role_utilities(cfg)?;
    let mut neighbors_valid = true;

    let join_slack = if cfg.k < cfg.n {
        let joined = cfg.with_k(cfg.k + 1);
        neighbors_valid &= second_stage_bne(&joined)?.is_bne;
        let (v_c_joined, _) = role_utilities(&joined)?;
        Some(v_independent.unwrap() - v_c_joined.unwrap())
    } else {
        None
    };
    let leave_slack = if cfg.k > 0 {
        let left = cfg.with_k(cfg.k - 1);
        neighbors_valid &= second_stage_bne(&left)?.is_bne;
        let (_, v_i_left) = role_utilities(&left)?;
        Some(v_coalition.unwrap() - v_i_left.unwrap())
    } else {
        None
    };

    let holds = join_slack.map_or(true, |s| s >= 0.0) && leave_slack.map_or(true, |s| s >= 0.0);
    // An empty coalition is unconditionally stable: the world a single
    // joiner would create is distributionally identical, so the join
    // margin is exactly zero. Only k >= 1 leans on the pricing stage.
    let stability = if !valid_at_k && cfg.k >= 1 {
        Stability::InvalidRegion
    } else if holds {
        Stability::Stable
    } else {
        Stability::Unstable
    };
    Ok(StabilityOutcome {
        stability,
        join_slack,
        leave_slack,
        valid_at_k,
        neighbors_valid,
    })
}
