use crate::NfirmError;

/// Exact enumeration walks all 2^n prediction vectors; past twelve firms
/// the sweep grids stop being interactive.
pub const MAX_FIRMS: usize = 12;

/// Market with `n` equally accurate firms, `k` of which share a predictor.
///
/// `theta`, `sigma`, `h`, and `l` keep their duopoly meanings; `a` is the
/// accuracy every firm has, whether in the coalition or not.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoalitionConfig {
    pub n: usize,
    pub k: usize,
    pub a: f64,
    pub theta: f64,
    pub sigma: f64,
    pub h: f64,
    pub l: f64,
}

impl CoalitionConfig {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        n: usize,
        k: usize,
        a: f64,
        theta: f64,
        sigma: f64,
        h: f64,
        l: f64,
    ) -> Result<Self, NfirmError> {
        let cfg = CoalitionConfig {
            n,
            k,
            a,
            theta,
            sigma,
            h,
            l,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), NfirmError> {
        if !(2..=MAX_FIRMS).contains(&self.n) {
            return Err(NfirmError::FirmCount { n: self.n });
        }
        if self.k > self.n {
            return Err(NfirmError::CoalitionTooLarge {
                k: self.k,
                n: self.n,
            });
        }
        check_range("a", self.a, 0.5, 1.0, "0.5 <= a <= 1")?;
        check_range("theta", self.theta, 0.0, 1.0, "0 <= theta <= 1")?;
        check_range("sigma", self.sigma, 0.0, 0.5, "0 <= sigma <= 0.5")?;
        if !(self.l.is_finite() && self.l > 0.0) {
            return Err(NfirmError::InvalidParameter {
                name: "l",
                value: self.l,
                constraint: "l > 0",
            });
        }
        if !(self.h.is_finite() && self.h > self.l) {
            return Err(NfirmError::InvalidParameter {
                name: "h",
                value: self.h,
                constraint: "h > l",
            });
        }
        Ok(())
    }

    /// Same market with a different coalition size.
    pub fn with_k(&self, k: usize) -> Self {
        CoalitionConfig { k, ..*self }
    }
}

fn check_range(
    name: &'static str,
    value: f64,
    lo: f64,
    hi: f64,
    constraint: &'static str,
) -> Result<(), NfirmError> {
    if value.is_finite() && (lo..=hi).contains(&value) {
        Ok(())
    } else {
        Err(NfirmError::InvalidParameter {
            name,
            value,
            constraint,
        })
    }
}
