use crate::{CoalitionConfig, NfirmError};
use market_core::Demand;

/// Probability of the prediction vector `bits` given the demand state,
/// when the first k firms share one predictor and the rest are
/// independent. Vectors whose coalition bits disagree have probability 0.
pub fn omega_k_prob(bits: &[bool], tau: Demand, cfg: &CoalitionConfig) -> Result<f64, NfirmError> {
    cfg.validate()?;
    if bits.len() != cfg.n {
        return Err(NfirmError::LengthMismatch {
            expected: cfg.n,
            got: bits.len(),
        });
    }
    let mut code = 0u32;
    for (i, &b) in bits.iter().enumerate() {
        code |= (b as u32) << i;
    }
    Ok(omega_code_prob(code, tau, cfg))
}

/// Same distribution with the vector packed into the low n bits of `code`
/// (bit i = firm i's prediction). Assumes a validated config.
pub(crate) fn omega_code_prob(code: u32, tau: Demand, cfg: &CoalitionConfig) -> f64 {
    // A singleton coalition is just an independent firm; folding it into
    // the tail keeps k = 1 and k = 0 bit-for-bit identical.
    let (a, n, k) = (cfg.a, cfg.n, if cfg.k <= 1 { 0 } else { cfg.k });
    let mut correct = 0u32;
    let mut wrong = 0u32;
    if k >= 1 {
        let mask = (1u32 << k) - 1;
        let block = code & mask;
        if block != 0 && block != mask {
            return 0.0;
        }
        // The shared predictor counts once however many firms hold it.
        match (block != 0, tau) {
            (true, Demand::High) | (false, Demand::Low) => correct += 1,
            _ => wrong += 1,
        }
    }
    let tail = code >> k;
    let tail_ones = tail.count_ones();
    let tail_len = (n - k) as u32;
    match tau {
        Demand::High => {
            correct += tail_ones;
            wrong += tail_len - tail_ones;
        }
        Demand::Low => {
            correct += tail_len - tail_ones;
            wrong += tail_ones;
        }
    }
    a.powi(correct as i32) * (1.0 - a).powi(wrong as i32)
}
