use crate::normal::phi_inv;
use crate::CopulaError;
use nalgebra::DMatrix;

/// Pull correlations of magnitude exactly 1 back by this much so the
/// covariance stays factorizable.
const SHRINK_EPS: f64 = 1e-6;

/// Cluster-correlated prediction model: firms in one cluster share the
/// latent correlation of that cluster, firms in different clusters share
/// the global one.
#[derive(Debug, Clone, PartialEq)]
pub struct CopulaSpec {
    /// Disjoint groups of 0-based firm indices covering every firm.
    pub clusters: Vec<Vec<usize>>,
    /// Latent correlation inside each cluster, aligned with `clusters`.
    pub rho_within: Vec<f64>,
    /// Latent correlation across clusters.
    pub rho_g: f64,
    /// Per-firm accuracy, in [0.5, 1).
    pub accuracies: Vec<f64>,
}

impl CopulaSpec {
    pub fn new(
        clusters: Vec<Vec<usize>>,
        rho_within: Vec<f64>,
        rho_g: f64,
        accuracies: Vec<f64>,
    ) -> Result<Self, CopulaError> {
        let spec = CopulaSpec {
            clusters,
            rho_within,
            rho_g,
            accuracies,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn n(&self) -> usize {
        self.accuracies.len()
    }

    pub fn validate(&self) -> Result<(), CopulaError> {
        let n = self.n();
        if n == 0 {
            return Err(CopulaError::BadPartition {
                n,
                detail: "no firms",
            });
        }
        let mut seen = vec![false; n];
        for cluster in &self.clusters {
            if cluster.is_empty() {
                return Err(CopulaError::BadPartition {
                    n,
                    detail: "empty cluster",
                });
            }
            for &firm in cluster {
                if firm >= n {
                    return Err(CopulaError::BadPartition {
                        n,
                        detail: "index out of range",
                    });
                }
                if seen[firm] {
                    return Err(CopulaError::BadPartition {
                        n,
                        detail: "index appears twice",
                    });
                }
                seen[firm] = true;
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(CopulaError::BadPartition {
                n,
                detail: "some firm belongs to no cluster",
            });
        }
        if self.rho_within.len() != self.clusters.len() {
            return Err(CopulaError::LengthMismatch {
                expected: self.clusters.len(),
                got: self.rho_within.len(),
            });
        }
        for &rho in self.rho_within.iter().chain([&self.rho_g]) {
            if !(-1.0..=1.0).contains(&rho) || !rho.is_finite() {
                return Err(CopulaError::InvalidParameter {
                    name: "rho",
                    value: rho,
                    constraint: "-1 <= rho <= 1",
                });
            }
        }
        for &a in &self.accuracies {
            if !(a.is_finite() && (0.5..1.0).contains(&a)) {
                return Err(CopulaError::InvalidParameter {
                    name: "accuracy",
                    value: a,
                    constraint: "0.5 <= a < 1",
                });
            }
        }
        Ok(())
    }

    /// Latent thresholds t_i = Φ⁻¹(a_i).
    pub fn thresholds(&self) -> Vec<f64> {
        self.accuracies.iter().map(|&a| phi_inv(a)).collect()
    }

    /// Index of the cluster containing `firm`. Assumes a validated spec.
    pub fn cluster_of(&self, firm: usize) -> usize {
        self.clusters
            .iter()
            .position(|c| c.contains(&firm))
            .expect("validated spec covers every firm")
    }
}

/// Assembled latent covariance with its spectrum diagnostic.
#[derive(Debug, Clone, PartialEq)]
pub struct Covariance {
    pub matrix: DMatrix<f64>,
    pub min_eigenvalue: f64,
    /// Whether any correlation of magnitude 1 was shrunk to keep the
    /// matrix usable; callers should surface this to their logs.
    pub shrunk: bool,
}

/// Build the latent correlation matrix (unit diagonal, within-cluster
/// entries per cluster, the global value elsewhere) and verify it is
/// positive semi-definite up to −1e−10 on the smallest eigenvalue.
pub fn assemble_covariance(spec: &CopulaSpec) -> Result<Covariance, CopulaError> {
    spec.validate()?;
    let n = spec.n();
    let mut shrunk = false;
    let mut soften = |rho: f64| {
        if rho.abs() == 1.0 {
            shrunk = true;
            rho - rho.signum() * SHRINK_EPS
        } else {
            rho
        }
    };
    let cluster_of: Vec<usize> = (0..n).map(|i| spec.cluster_of(i)).collect();
    let mut matrix = DMatrix::<f64>::identity(n, n);
    for i in 0..n {
        for j in 0..i {
            let rho = if cluster_of[i] == cluster_of[j] {
                soften(spec.rho_within[cluster_of[i]])
            } else {
                soften(spec.rho_g)
            };
            matrix[(i, j)] = rho;
            matrix[(j, i)] = rho;
        }
    }
    let min_eigenvalue = matrix
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .fold(f64::INFINITY, |acc, &e| acc.min(e));
    if min_eigenvalue < -1e-10 {
        return Err(CopulaError::NotPositiveSemiDefinite(min_eigenvalue));
    }
    Ok(Covariance {
        matrix,
        min_eigenvalue,
        shrunk,
    })
}
