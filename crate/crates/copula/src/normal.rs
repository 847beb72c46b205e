use statrs::distribution::{Continuous, ContinuousCDF, Normal};

fn std_normal() -> Normal {
    Normal::new(0.0, 1.0).unwrap()
}

pub(crate) fn phi(x: f64) -> f64 {
    std_normal().cdf(x)
}

/// Quantile of the standard normal, polished by one Newton step so the
/// round trip phi(phi_inv(p)) holds to machine precision; the raw
/// library inverse is only good to about 1e-8, which is visible in the
/// thresholds.
pub(crate) fn phi_inv(p: f64) -> f64 {
    let p = p.clamp(1e-300, 1.0 - 1e-16);
    let normal = std_normal();
    let x = normal.inverse_cdf(p);
    let density = normal.pdf(x);
    if density > 1e-300 {
        x - (normal.cdf(x) - p) / density
    } else {
        x
    }
}

/// P[Z1 ≤ x, Z2 ≤ y] for standard bivariate normals with correlation rho.
///
/// Uses the single-integral form Φ(x)Φ(y) + (1/2π)∫₀^{asin ρ}
/// exp(−(x−y)²/(2cos²t) − xy/(1+sin t)) dt, evaluated by adaptive
/// Simpson quadrature. The exponent is written in this split form
/// because the textbook one, −(x² + y² − 2xy·sin t)/(2cos²t), cancels
/// catastrophically as t approaches π/2 and the resulting noise both
/// stalls the refinement and breaks the Fréchet bounds near |rho| = 1.
/// Negative correlations go through the complement identity
/// Φ₂(x, y; ρ) = Φ(x) − Φ₂(x, −y; −ρ) to keep sin t nonnegative.
/// Deterministic and smooth in all three arguments, which the
/// polychoric root-finder relies on.
pub fn bivariate_cdf(x: f64, y: f64, rho: f64) -> f64 {
    debug_assert!((-1.0..=1.0).contains(&rho));
    if x <= -9.0 || y <= -9.0 {
        return 0.0;
    }
    if x >= 9.0 {
        return phi(y);
    }
    if y >= 9.0 {
        return phi(x);
    }
    if rho == 0.0 {
        return phi(x) * phi(y);
    }
    if rho >= 1.0 {
        return phi(x.min(y));
    }
    if rho <= -1.0 {
        return (phi(x) + phi(y) - 1.0).max(0.0);
    }
    if rho < 0.0 {
        return (phi(x) - bivariate_cdf(x, -y, -rho)).clamp(0.0, 1.0);
    }
    let integrand = |t: f64| {
        let (sin_t, cos_t) = t.sin_cos();
        let spread = (x - y) * (x - y) / (2.0 * cos_t * cos_t);
        (-spread - x * y / (1.0 + sin_t)).exp()
    };
    let correction =
        adaptive_simpson(&integrand, 0.0, rho.asin(), 1e-12, 32) / (2.0 * std::f64::consts::PI);
    (phi(x) * phi(y) + correction).clamp(0.0, 1.0)
}

fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}
