use thiserror::Error;

/// Errors from parameter validation and probability conditioning.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MarketError {
    #[error("invalid parameter {name} = {value}: must satisfy {constraint}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },
    /// Conditioning on a prediction value that occurs with probability zero
    /// (e.g. a perfect model never outputs the wrong label when θ ∈ {0, 1}).
    #[error("firm {firm}'s prediction is never {prediction}: cannot condition on a zero-probability event")]
    ZeroProbabilityConditioning { firm: usize, prediction: u8 },
}

pub(crate) fn check_range(
    name: &'static str,
    value: f64,
    lo: f64,
    hi: f64,
    constraint: &'static str,
) -> Result<(), MarketError> {
    if value.is_finite() && value >= lo && value <= hi {
        Ok(())
    } else {
        Err(MarketError::InvalidParameter {
            name,
            value,
            constraint,
        })
    }
}
