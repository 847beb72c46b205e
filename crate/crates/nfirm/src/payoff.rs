use crate::{CoalitionConfig, NfirmError};
use market_core::{Demand, Price};

/// Payoff of `firm` under posted `prices` and demand state `tau`.
///
/// High-demand consumers split evenly across all firms when prices agree;
/// otherwise a share sigma stays with the High-pricers (split among them)
/// and the rest goes to the Low-pricers. Low-demand consumers only ever
/// buy at the low price, splitting across the Low-pricers.
pub fn nfirm_payoff(
    firm: usize,
    prices: &[Price],
    tau: Demand,
    cfg: &CoalitionConfig,
) -> Result<f64, NfirmError> {
    cfg.validate()?;
    if prices.len() != cfg.n {
        return Err(NfirmError::LengthMismatch {
            expected: cfg.n,
            got: prices.len(),
        });
    }
    if firm >= cfg.n {
        return Err(NfirmError::FirmIndex { firm, n: cfg.n });
    }
    let n_high = prices.iter().filter(|&&p| p == Price::High).count();
    Ok(price_share(prices[firm], n_high, tau, cfg))
}

/// Table-cell payoff given only the firm's own price and the count of
/// High-pricers. Assumes a validated config and a consistent count.
pub(crate) fn price_share(own: Price, n_high: usize, tau: Demand, cfg: &CoalitionConfig) -> f64 {
    let n = cfg.n;
    let n_low = n - n_high;
    match (tau, own) {
        (Demand::High, Price::High) => {
            if n_high == n {
                cfg.h / n as f64
            } else {
                cfg.sigma * cfg.h / n_high as f64
            }
        }
        (Demand::High, Price::Low) => {
            if n_low == n {
                cfg.l / n as f64
            } else {
                (1.0 - cfg.sigma) * cfg.l / n_low as f64
            }
        }
        (Demand::Low, Price::High) => 0.0,
        (Demand::Low, Price::Low) => {
            if n_low == n {
                cfg.l / n as f64
            } else {
                cfg.l / n_low as f64
            }
        }
    }
}
