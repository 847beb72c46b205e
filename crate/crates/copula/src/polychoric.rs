use crate::normal::{bivariate_cdf, phi_inv};
use crate::CopulaError;

/// Default bisection tolerance on the latent scale.
pub const POLYCHORIC_TOL: f64 = 1e-8;

/// The inversion brackets the latent correlation just inside of the
/// open interval so the boundary evaluations stay finite.
const LATENT_BOUND: f64 = 1.0 - 1e-9;

/// Correlation of the two binary predictions implied by a latent
/// Gaussian correlation, given the marginal accuracies:
/// (Φ₂(t_i, t_j; ρ) − a_i a_j) / √(a_i(1−a_i) a_j(1−a_j)).
pub fn binary_correlation(latent: f64, a_i: f64, a_j: f64) -> Result<f64, CopulaError> {
    check_marginal("a_i", a_i)?;
    check_marginal("a_j", a_j)?;
    if !latent.is_finite() || !(-1.0..=1.0).contains(&latent) {
        return Err(CopulaError::InvalidParameter {
            name: "latent",
            value: latent,
            constraint: "-1 <= latent <= 1",
        });
    }
    let joint = bivariate_cdf(phi_inv(a_i), phi_inv(a_j), latent);
    let scale = (a_i * (1.0 - a_i) * a_j * (1.0 - a_j)).sqrt();
    Ok((joint - a_i * a_j) / scale)
}

/// Latent Gaussian correlation whose implied binary-scale correlation
/// equals `rho_binary`, found by bisection; the forward map is
/// nondecreasing in the latent correlation, and not every binary value
/// is reachable when the marginals differ.
pub fn polychoric_to_gaussian(
    rho_binary: f64,
    a_i: f64,
    a_j: f64,
    tol: f64,
) -> Result<f64, CopulaError> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(CopulaError::InvalidParameter {
            name: "tol",
            value: tol,
            constraint: "tol > 0",
        });
    }
    if !rho_binary.is_finite() {
        return Err(CopulaError::InvalidParameter {
            name: "rho_binary",
            value: rho_binary,
            constraint: "a finite correlation",
        });
    }
    // The attainable range comes from the exact comonotone and
    // antithetic limits, which cost nothing to evaluate.
    let at_lo = binary_correlation(-1.0, a_i, a_j)?;
    let at_hi = binary_correlation(1.0, a_i, a_j)?;
    if rho_binary < at_lo - tol || rho_binary > at_hi + tol {
        return Err(CopulaError::UnachievableCorrelation {
            rho_binary,
            min: at_lo,
            max: at_hi,
        });
    }
    let mut lo = -LATENT_BOUND;
    let mut hi = LATENT_BOUND;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if binary_correlation(mid, a_i, a_j)? < rho_binary {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn check_marginal(name: &'static str, a: f64) -> Result<(), CopulaError> {
    if a.is_finite() && 0.0 < a && a < 1.0 {
        Ok(())
    } else {
        Err(CopulaError::InvalidParameter {
            name,
            value: a,
            constraint: "0 < a < 1",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_maps_to_zero_either_way() {
        assert!(binary_correlation(0.0, 0.9, 0.65).unwrap().abs() < 1e-12);
        let latent = polychoric_to_gaussian(0.0, 0.85, 0.6, POLYCHORIC_TOL).unwrap();
        assert!(latent.abs() < 1e-7);
    }

    #[test]
    fn round_trips_through_the_binary_scale() {
        for (latent, a_i, a_j) in [(0.8, 0.9, 0.9), (-0.3, 0.7, 0.85), (0.25, 0.6, 0.6)] {
            let on_binary = binary_correlation(latent, a_i, a_j).unwrap();
            let back = polychoric_to_gaussian(on_binary, a_i, a_j, POLYCHORIC_TOL).unwrap();
            assert!(
                (back - latent).abs() < 1e-6,
                "latent {latent} came back as {back}"
            );
        }
    }

    #[test]
    fn the_root_reproduces_the_requested_correlation() {
        let root = polychoric_to_gaussian(0.4, 0.75, 0.75, POLYCHORIC_TOL).unwrap();
        let residual = binary_correlation(root, 0.75, 0.75).unwrap() - 0.4;
        assert!(residual.abs() < 1e-6, "residual = {residual}");
    }

    #[test]
    fn matches_the_two_firm_joint_cell() {
        // Binary correlation 0.5 at accuracy 0.9 puts the both-correct
        // cell at a^2 + rho a(1-a) = 0.855.
        let latent = polychoric_to_gaussian(0.5, 0.9, 0.9, POLYCHORIC_TOL).unwrap();
        let joint = bivariate_cdf(phi_inv(0.9), phi_inv(0.9), latent);
        assert!((joint - 0.855).abs() < 1e-6, "joint = {joint}");
    }

    #[test]
    fn the_forward_map_is_monotone() {
        let mut prev = f64::NEG_INFINITY;
        for step in 0..=50 {
            let latent = -0.98 + 1.96 * step as f64 / 50.0;
            let value = binary_correlation(latent, 0.8, 0.7).unwrap();
            assert!(value > prev, "not increasing at latent = {latent}");
            prev = value;
        }
    }

    #[test]
    fn reports_the_attainable_range_when_asked_too_much() {
        // With marginals 0.9 and 0.6 the comonotone bound caps the
        // binary correlation well below 0.8.
        let err = polychoric_to_gaussian(0.8, 0.9, 0.6, POLYCHORIC_TOL).unwrap_err();
        match err {
            CopulaError::UnachievableCorrelation { min, max, .. } => {
                assert!(max < 0.5, "max = {max}");
                assert!(min > -0.5, "min = {min}");
            }
            other => panic!("expected range error, got {other:?}"),
        }
        assert!(polychoric_to_gaussian(0.4, 0.9, 0.6, POLYCHORIC_TOL).is_ok());
    }

    #[test]
    fn rejects_degenerate_marginals() {
        assert!(binary_correlation(0.5, 1.0, 0.8).is_err());
        assert!(binary_correlation(0.5, 0.8, 0.0).is_err());
        assert!(binary_correlation(1.5, 0.8, 0.8).is_err());
        assert!(polychoric_to_gaussian(0.5, 0.8, 0.8, 0.0).is_err());
    }
}
