use crate::log::PredictionLog;
use crate::EmpiricalError;

/// Raw per-firm conditional rates, before pooling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirmRates {
    /// P(prediction = 1 | high demand).
    pub tpr: f64,
    /// P(prediction = 0 | low demand).
    pub tnr: f64,
}

/// Market parameters recovered from a prediction log.
///
/// Accuracies pool the two conditional rates, matching the model's
/// equal-rates assumption; `rates` keeps the unpooled values so a log
/// that violates the assumption is detectable. The correlation is
/// reported both raw and clamped onto [0, 1], since sampling noise can
/// push the raw solution slightly outside.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatedParams {
    pub a1_hat: f64,
    pub a1_se: f64,
    pub a2_hat: f64,
    pub a2_se: f64,
    pub theta_hat: f64,
    pub theta_se: f64,
    pub rho_raw: f64,
    pub rho_hat: f64,
    pub rho_se: f64,
    pub rates: [FirmRates; 2],
    pub counts: [[[u64; 2]; 2]; 2],
}

impl EstimatedParams {
    /// Whether clamping the correlation moved it by at least its own
    /// standard error, i.e. by more than sampling noise explains.
    pub fn projection_flagged(&self) -> bool {
        (self.rho_raw - self.rho_hat).abs() >= self.rho_se
    }
}

/// Invert the joint-distribution cells on empirical frequencies.
///
/// Accuracies average the true-positive and true-negative rates, the
/// demand share is the fraction of high-demand rows, and the correlation
/// solves the both-predict-correctly cell identity
/// P(both correct | tau) = a1 a2 + rho (min(a1, a2) - a1 a2)
/// in each demand state, count-weighted. Standard errors treat each cell
/// frequency as binomial.
pub fn estimate_params(log: &PredictionLog) -> Result<EstimatedParams, EmpiricalError> {
    let counts = log.cell_counts();
    let branch_total = |tau: usize| -> u64 { counts[tau].iter().flatten().sum() };
    let (n_l, n_h) = (branch_total(0), branch_total(1));
    if n_h == 0 {
        return Err(EmpiricalError::Degenerate("no high-demand rows"));
    }
    if n_l == 0 {
        return Err(EmpiricalError::Degenerate("no low-demand rows"));
    }
    let n = n_l + n_h;

    let firm_ones = |tau: usize, firm: usize| -> u64 {
        (0..2)
            .map(|other| match firm {
                0 => counts[tau][1][other],
                _ => counts[tau][other][1],
            })
            .sum()
    };
    let mut rates = [FirmRates { tpr: 0.0, tnr: 0.0 }; 2];
    let mut a_hat = [0.0; 2];
    let mut a_se = [0.0; 2];
    for firm in 0..2 {
        let ones = firm_ones(1, firm) + firm_ones(0, firm);
        if ones == 0 || ones == n {
            return Err(EmpiricalError::Degenerate(if firm == 0 {
                "firm 1 prediction is constant"
            } else {
                "firm 2 prediction is constant"
            }));
        }
        let tpr = firm_ones(1, firm) as f64 / n_h as f64;
        let tnr = 1.0 - firm_ones(0, firm) as f64 / n_l as f64;
        rates[firm] = FirmRates { tpr, tnr };
        a_hat[firm] = 0.5 * (tpr + tnr);
        a_se[firm] = 0.5 * (tpr * (1.0 - tpr) / n_h as f64 + tnr * (1.0 - tnr) / n_l as f64).sqrt();
    }

    let theta_hat = n_h as f64 / n as f64;
    let theta_se = (theta_hat * (1.0 - theta_hat) / n as f64).sqrt();

    let product = a_hat[0] * a_hat[1];
    let denom = a_hat[0].min(a_hat[1]) - product;
    if denom <= 1e-12 {
        return Err(EmpiricalError::Degenerate(
            "boundary accuracy leaves the correlation unidentified",
        ));
    }
    // Conditional on either demand state, "both correct" is the cell
    // carrying the correlation: predictions (1,1) under high demand,
    // (0,0) under low.
    let p_high = counts[1][1][1] as f64 / n_h as f64;
    let p_low = counts[0][0][0] as f64 / n_l as f64;
    let rho_high = (p_high - product) / denom;
    let rho_low = (p_low - product) / denom;
    let rho_raw = (n_h as f64 * rho_high + n_l as f64 * rho_low) / n as f64;
    let var_high = p_high * (1.0 - p_high) / n_h as f64 / (denom * denom);
    let var_low = p_low * (1.0 - p_low) / n_l as f64 / (denom * denom);
    let rho_se =
        ((n_h as f64).powi(2) * var_high + (n_l as f64).powi(2) * var_low).sqrt() / n as f64;

    Ok(EstimatedParams {
        a1_hat: a_hat[0],
        a1_se: a_se[0],
        a2_hat: a_hat[1],
        a2_se: a_se[1],
        theta_hat,
        theta_se,
        rho_raw,
        rho_hat: rho_raw.clamp(0.0, 1.0),
        rho_se,
        rates,
        counts,
    })
}
