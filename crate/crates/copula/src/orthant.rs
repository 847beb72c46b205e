use crate::normal::{phi, phi_inv};
use crate::spec::{assemble_covariance, CopulaSpec};
use crate::CopulaError;
use market_core::Demand;
use nalgebra::{Cholesky, DMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Fewer samples than this gives standard errors too loose to act on.
pub const MIN_SAMPLES: u64 = 10_000;

const REPLICATES: u64 = 16;

const PRIMES: [u64; 31] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 103, 107, 109, 113, 127,
];

/// How to estimate the orthant probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integration {
    /// Randomized low-discrepancy rule: the error estimate comes from
    /// independent random shifts of the same point set.
    QuasiMonteCarlo { samples: u64, seed: u64 },
    /// Plain pseudo-random sampling of the same integrand.
    MonteCarlo { samples: u64, seed: u64 },
}

impl Integration {
    fn samples(self) -> u64 {
        match self {
            Integration::QuasiMonteCarlo { samples, .. } => samples,
            Integration::MonteCarlo { samples, .. } => samples,
        }
    }
}

/// Estimated probability with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbEstimate {
    pub estimate: f64,
    pub std_error: f64,
}

/// Probability of observing the prediction vector `bits` conditional on
/// the demand state, under the latent-Gaussian model in `spec`.
///
/// The orthant integral is rewritten by sequential conditioning on the
/// Cholesky factor, which maps the unit cube onto the box and leaves a
/// smooth weight to average; the same weight is driven either by a
/// shifted low-discrepancy sequence or by plain uniforms.
pub fn copula_joint_prob(
    bits: &[bool],
    tau: Demand,
    spec: &CopulaSpec,
    method: Integration,
) -> Result<ProbEstimate, CopulaError> {
    spec.validate()?;
    let n = spec.n();
    if bits.len() != n {
        return Err(CopulaError::LengthMismatch {
            expected: n,
            got: bits.len(),
        });
    }
    if method.samples() < MIN_SAMPLES {
        return Err(CopulaError::TooFewSamples(method.samples()));
    }
    if n > PRIMES.len() + 1 {
        return Err(CopulaError::InvalidParameter {
            name: "n",
            value: n as f64,
            constraint: "at most 32 firms per joint probability",
        });
    }

    let covariance = assemble_covariance(spec)?;
    let l = factor_with_jitter(&covariance.matrix)?;
    let thresholds = spec.thresholds();
    // Under high demand a correct firm predicts 1, i.e. its latent
    // coordinate falls below the threshold; under low demand the box
    // orientation flips.
    let le: Vec<bool> = bits
        .iter()
        .map(|&bit| (tau == Demand::High) == bit)
        .collect();

    let result = match method {
        Integration::QuasiMonteCarlo { samples, seed } => {
            quasi_estimate(&l, &thresholds, &le, samples, seed)
        }
        Integration::MonteCarlo { samples, seed } => {
            plain_estimate(&l, &thresholds, &le, samples, seed)
        }
    };
    if !result.estimate.is_finite() || !result.std_error.is_finite() {
        return Err(CopulaError::IntegrationFailure);
    }
    Ok(result)
}

fn factor_with_jitter(matrix: &DMatrix<f64>) -> Result<DMatrix<f64>, CopulaError> {
    for jitter in [0.0, 1e-12, 1e-10] {
        let mut m = matrix.clone();
        for i in 0..m.nrows() {
            m[(i, i)] += jitter;
        }
        if let Some(chol) = Cholesky::new(m) {
            return Ok(chol.l());
        }
    }
    Err(CopulaError::FactorizationFailed)
}

/// One evaluation of the sequentially conditioned integrand: `uniforms`
/// holds one value per dimension except the last, whose box width needs
/// no further conditioning.
fn box_weight(l: &DMatrix<f64>, thresholds: &[f64], le: &[bool], uniforms: &[f64]) -> f64 {
    let n = thresholds.len();
    let mut y = vec![0.0; n.saturating_sub(1)];
    let mut weight = 1.0;
    for i in 0..n {
        let mut shifted = thresholds[i];
        for j in 0..i {
            shifted -= l[(i, j)] * y[j];
        }
        let frac = phi(shifted / l[(i, i)]);
        let (d, e) = if le[i] { (0.0, frac) } else { (frac, 1.0) };
        let width = e - d;
        if width <= 0.0 {
            return 0.0;
        }
        weight *= width;
        if i + 1 < n {
            y[i] = phi_inv(d + uniforms[i] * width);
        }
    }
    weight
}

fn quasi_estimate(
    l: &DMatrix<f64>,
    thresholds: &[f64],
    le: &[bool],
    samples: u64,
    seed: u64,
) -> ProbEstimate {
    let dims = thresholds.len() - 1;
    let per_rep = samples.div_ceil(REPLICATES);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut uniforms = vec![0.0; dims];
    let mut rep_means = [0.0; REPLICATES as usize];
    for mean in rep_means.iter_mut() {
        let shifts: Vec<f64> = (0..dims).map(|_| rng.random::<f64>()).collect();
        let mut acc = 0.0;
        for point in 1..=per_rep {
            for dim in 0..dims {
                uniforms[dim] = (radical_inverse(point, PRIMES[dim]) + shifts[dim]).fract();
            }
            acc += box_weight(l, thresholds, le, &uniforms);
        }
        *mean = acc / per_rep as f64;
    }
    let estimate = rep_means.iter().sum::<f64>() / REPLICATES as f64;
    let spread: f64 = rep_means.iter().map(|m| (m - estimate).powi(2)).sum();
    let std_error = (spread / (REPLICATES * (REPLICATES - 1)) as f64).sqrt();
    ProbEstimate {
        estimate,
        std_error,
    }
}

fn plain_estimate(
    l: &DMatrix<f64>,
    thresholds: &[f64],
    le: &[bool],
    samples: u64,
    seed: u64,
) -> ProbEstimate {
    let dims = thresholds.len() - 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut uniforms = vec![0.0; dims];
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..samples {
        for u in uniforms.iter_mut() {
            *u = rng.random();
        }
        let w = box_weight(l, thresholds, le, &uniforms);
        sum += w;
        sum_sq += w * w;
    }
    let n = samples as f64;
    let estimate = sum / n;
    let variance = ((sum_sq - n * estimate * estimate) / (n - 1.0)).max(0.0);
    ProbEstimate {
        estimate,
        std_error: (variance / n).sqrt(),
    }
}

/// Van der Corput digit reversal of `index` in the given prime base.
fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let mut inv = 0.0;
    let mut scale = 1.0 / base as f64;
    while index > 0 {
        inv += scale * (index % base) as f64;
        index /= base;
        scale /= base as f64;
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polychoric::polychoric_to_gaussian;
    use crate::POLYCHORIC_TOL;

    fn qmc(samples: u64) -> Integration {
        Integration::QuasiMonteCarlo { samples, seed: 7 }
    }

    fn uniform_spec(rho_within: f64, rho_g: f64, accuracies: Vec<f64>) -> CopulaSpec {
        let n = accuracies.len();
        CopulaSpec::new(vec![(0..n).collect()], vec![rho_within], rho_g, accuracies).unwrap()
    }

    #[test]
    fn independent_firms_multiply_their_marginals() {
        let spec = CopulaSpec::new(
            vec![vec![0], vec![1], vec![2]],
            vec![0.0; 3],
            0.0,
            vec![0.8; 3],
        )
        .unwrap();
        let out = copula_joint_prob(&[true, true, true], Demand::High, &spec, qmc(20_000)).unwrap();
        // With an identity covariance the weight is the same at every
        // sample point, so the estimate is exact.
        assert!((out.estimate - 0.8f64.powi(3)).abs() < 1e-12);
        assert!(out.std_error < 1e-12);
    }

    #[test]
    fn a_single_firm_recovers_its_accuracy_exactly() {
        let spec = CopulaSpec::new(vec![vec![0]], vec![0.0], 0.0, vec![0.73]).unwrap();
        for (bit, want) in [(true, 0.73), (false, 0.27)] {
            let out = copula_joint_prob(&[bit], Demand::High, &spec, qmc(MIN_SAMPLES)).unwrap();
            assert!((out.estimate - want).abs() < 1e-9);
            assert!(out.std_error < 1e-12);
        }
    }

    #[test]
    fn joint_probabilities_sum_to_one() {
        let spec = uniform_spec(0.6, 0.0, vec![0.9, 0.8, 0.7]);
        let mut total = 0.0;
        let mut var = 0.0;
        for code in 0u32..8 {
            let bits: Vec<bool> = (0..3).map(|i| code >> i & 1 == 1).collect();
            let out = copula_joint_prob(&bits, Demand::High, &spec, qmc(100_000)).unwrap();
            assert!(out.estimate >= 0.0);
            total += out.estimate;
            var += out.std_error * out.std_error;
        }
        assert!(
            (total - 1.0).abs() <= 4.0 * var.sqrt().max(1e-9),
            "total = {total}"
        );
    }

    #[test]
    fn low_demand_mirrors_high_demand_with_flipped_bits() {
        let spec = uniform_spec(0.5, 0.0, vec![0.85, 0.75, 0.65]);
        let bits = [true, false, true];
        let flipped = [false, true, false];
        let low = copula_joint_prob(&bits, Demand::Low, &spec, qmc(50_000)).unwrap();
        let high = copula_joint_prob(&flipped, Demand::High, &spec, qmc(50_000)).unwrap();
        assert_eq!(low, high);
    }

    #[test]
    fn marginals_survive_the_correlation() {
        let spec = CopulaSpec::new(vec![vec![0, 1]], vec![0.5], 0.0, vec![0.85, 0.75]).unwrap();
        let mut marginal = 0.0;
        let mut var = 0.0;
        for other in [false, true] {
            let out = copula_joint_prob(&[true, other], Demand::High, &spec, qmc(100_000)).unwrap();
            marginal += out.estimate;
            var += out.std_error * out.std_error;
        }
        assert!((marginal - 0.85).abs() <= 4.0 * var.sqrt().max(1e-9));
    }

    #[test]
    fn matches_the_closed_form_pairwise_cell() {
        // On the binary scale two firms at accuracy 0.9 with correlation
        // 0.5 should both predict 1 under high demand with probability
        // a^2 + rho a(1-a) = 0.855.
        let latent = polychoric_to_gaussian(0.5, 0.9, 0.9, POLYCHORIC_TOL).unwrap();
        let spec = CopulaSpec::new(vec![vec![0, 1]], vec![latent], 0.0, vec![0.9, 0.9]).unwrap();
        let out = copula_joint_prob(&[true, true], Demand::High, &spec, qmc(100_000)).unwrap();
        assert!(
            (out.estimate - 0.855).abs() <= 3.0 * out.std_error.max(1e-7),
            "estimate = {}, se = {}",
            out.estimate,
            out.std_error
        );
    }

    #[test]
    fn plain_sampling_agrees_with_the_low_discrepancy_rule() {
        let spec = uniform_spec(0.7, 0.2, vec![0.9, 0.8, 0.7]);
        let bits = [true, true, false];
        let q = copula_joint_prob(&bits, Demand::High, &spec, qmc(200_000)).unwrap();
        let m = copula_joint_prob(
            &bits,
            Demand::High,
            &spec,
            Integration::MonteCarlo {
                samples: 200_000,
                seed: 11,
            },
        )
        .unwrap();
        let gap = (q.estimate - m.estimate).abs();
        let combined = (q.std_error.powi(2) + m.std_error.powi(2)).sqrt();
        assert!(
            gap <= 4.0 * combined,
            "gap = {gap}, combined se = {combined}"
        );
        assert!(m.std_error > q.std_error);
    }

    #[test]
    fn rejects_mismatched_inputs_and_tiny_sample_counts() {
        let spec = uniform_spec(0.5, 0.0, vec![0.8, 0.8]);
        assert!(matches!(
            copula_joint_prob(&[true], Demand::High, &spec, qmc(MIN_SAMPLES)),
            Err(CopulaError::LengthMismatch {
                expected: 2,
                got: 1
            })
        ));
        assert!(matches!(
            copula_joint_prob(&[true, true], Demand::High, &spec, qmc(MIN_SAMPLES - 1)),
            Err(CopulaError::TooFewSamples(_))
        ));
    }
}
