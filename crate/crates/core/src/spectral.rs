//! Laplacian kernels and the dense total-system-error oracles.
//!
//! The oracles never touch the joint-centrality formulas: they factor the
//! grounded Laplacian `L_F` (noise-free leaders) or `M = L + K` (finite gain)
//! and take the trace of the inverse. For symmetric `M` the Lyapunov equation
//! `M S + S M = sigma^2 I` is solved by `S = (sigma^2 / 2) M^-1`.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{check_members, followers, Graph, LeaderMode, LeaderSet};

/// Spectral data derived once per graph.
#[derive(Debug, Clone)]
pub struct GraphKernels {
    n: usize,
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<f64>,
    lplus: DMatrix<f64>,
    l2plus: DMatrix<f64>,
    kirchhoff: f64,
    zero_tol: f64,
}

impl GraphKernels {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Laplacian eigenvalues, ascending; the first is numerically zero.
    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    /// Orthonormal eigenvectors as columns, matching [`Self::eigenvalues`].
    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    /// Moore-Penrose pseudoinverse `L+`.
    pub fn lplus(&self) -> &DMatrix<f64> {
        &self.lplus
    }

    /// `(L^2)+ = (L+)^2`.
    pub fn l2plus(&self) -> &DMatrix<f64> {
        &self.l2plus
    }

    /// Kirchhoff index `K_f = n tr(L+)`, the sum of resistance distances over
    /// unordered pairs.
    pub fn kirchhoff(&self) -> f64 {
        self.kirchhoff
    }

    /// Eigenvalues at or below this are treated as zero.
    pub fn zero_tolerance(&self) -> f64 {
        self.zero_tol
    }
}

/// Zero-eigenvalue cutoff `n * eps * lambda_max`.
pub fn zero_tolerance(n: usize, lambda_max: f64) -> f64 {
    n as f64 * f64::EPSILON * lambda_max.abs()
}

/// Symmetric eigendecomposition with eigenpairs sorted by ascending eigenvalue.
pub fn sorted_eigen(m: &DMatrix<f64>) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let n = m.nrows();
    let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, 0)
        .ok_or_else(|| Error::Eigen("symmetric eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_iterator(n, order.iter().map(|&p| eig.eigenvalues[p]));
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Eigen("non-finite eigenvalue".into()));
    }
    Ok((values, vectors))
}

/// Eigendecomposes `L` and builds `L+`, `(L^2)+` and `K_f`.
pub fn compute_kernels(g: &Graph) -> Result<GraphKernels> {
    let n = g.n();
    let (values, vectors) = sorted_eigen(&g.laplacian())?;
    let tol = zero_tolerance(n, values[n - 1]);
    if values[0].abs() > tol {
        return Err(Error::Eigen(format!(
            "smallest Laplacian eigenvalue {:e} is not numerically zero",
            values[0]
        )));
    }
    if values[1] <= tol {
        return Err(Error::IllConditioned {
            lambda2: values[1],
            tol,
        });
    }
    let mut lplus = DMatrix::zeros(n, n);
    for p in 1..n {
        let v = vectors.column(p);
        lplus.ger(1.0 / values[p], &v, &v, 1.0);
    }
    let lplus = symmetrize(lplus);
    let l2plus = symmetrize(&lplus * &lplus);
    let kirchhoff = n as f64 * lplus.trace();
    Ok(GraphKernels {
        n,
        eigenvalues: values,
        eigenvectors: vectors,
        lplus,
        l2plus,
        kirchhoff,
        zero_tol: tol,
    })
}

fn symmetrize(m: DMatrix<f64>) -> DMatrix<f64> {
    (&m + m.transpose()) * 0.5
}

/// Steady-state variances about the signal.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorReport {
    /// Trace of the steady-state covariance.
    pub total_error: f64,
    pub per_node_variance: Vec<f64>,
    pub sigma: f64,
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma.is_finite() && sigma >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "noise intensity must be finite and nonnegative, got {sigma}"
        )))
    }
}

/// Inverse of a symmetric positive-definite matrix via Cholesky, rejecting
/// factors whose pivots collapse below `n * eps` of the largest diagonal entry.
pub fn spd_inverse(m: DMatrix<f64>, what: &str) -> Result<DMatrix<f64>> {
    let n = m.nrows();
    let scale = m.diagonal().amax();
    let chol = Cholesky::<f64, Dyn>::new(m)
        .ok_or_else(|| Error::Singular(format!("{what} is not positive definite")))?;
    let floor = n as f64 * f64::EPSILON * scale;
    let min_pivot = chol
        .l_dirty()
        .diagonal()
        .iter()
        .map(|d| d * d)
        .fold(f64::INFINITY, f64::min);
    if min_pivot <= floor {
        return Err(Error::Singular(format!(
            "{what} is numerically singular (pivot {min_pivot:e} <= {floor:e})"
        )));
    }
    Ok(chol.inverse())
}

/// Noise-free leaders: `(sigma^2 / 2) tr(L_F^-1)`, leaders contribute zero.
pub fn oracle_error_noise_free(g: &Graph, members: &[usize], sigma: f64) -> Result<ErrorReport> {
    let n = g.n();
    check_sigma(sigma)?;
    check_members(members, n)?;
    if members.is_empty() || members.len() >= n {
        return Err(Error::InvalidLeaderSet(format!(
            "noise-free oracle needs 1 <= m < n, got m={} n={n}",
            members.len()
        )));
    }
    let fol = followers(members, n);
    let l = g.laplacian();
    let lf = l.select_rows(&fol).select_columns(&fol);
    let inv = spd_inverse(lf, "grounded Laplacian L_F")?;
    let half = 0.5 * sigma * sigma;
    let mut per_node = vec![0.0; n];
    for (a, &i) in fol.iter().enumerate() {
        per_node[i] = half * inv[(a, a)];
    }
    Ok(ErrorReport {
        total_error: half * inv.trace(),
        per_node_variance: per_node,
        sigma,
    })
}

/// `M = L + K` with `K_ss = k` on the leaders.
pub fn gain_matrix(g: &Graph, members: &[usize], k: f64) -> Result<DMatrix<f64>> {
    LeaderMode::Gain(k).validate()?;
    check_members(members, g.n())?;
    if members.is_empty() {
        return Err(Error::InvalidLeaderSet("leader set is empty".into()));
    }
    let mut m = g.laplacian();
    for &s in members {
        m[(s, s)] += k;
    }
    Ok(m)
}

/// Finite gain: `(sigma^2 / 2) tr((L + K)^-1)`.
pub fn oracle_error_gain(g: &Graph, members: &[usize], k: f64, sigma: f64) -> Result<ErrorReport> {
    check_sigma(sigma)?;
    let inv = spd_inverse(gain_matrix(g, members, k)?, "M = L + K")?;
    let half = 0.5 * sigma * sigma;
    let per_node: Vec<f64> = inv.diagonal().iter().map(|d| half * d).collect();
    Ok(ErrorReport {
        total_error: half * inv.trace(),
        per_node_variance: per_node,
        sigma,
    })
}

/// Dispatches on the leader mode.
pub fn oracle_error(g: &Graph, leaders: &LeaderSet, sigma: f64) -> Result<ErrorReport> {
    match leaders.mode() {
        LeaderMode::NoiseFree => oracle_error_noise_free(g, leaders.members(), sigma),
        LeaderMode::Gain(k) => oracle_error_gain(g, leaders.members(), k, sigma),
    }
}

/// Per-node variance from the eigenpairs of `M = L + K`:
/// `S_ii = sigma^2 sum_p |v_i^(p)|^2 / (2 lambda_p)`.
pub fn per_node_variance_spectral(
    g: &Graph,
    members: &[usize],
    k: f64,
    sigma: f64,
) -> Result<Vec<f64>> {
    check_sigma(sigma)?;
    let m = gain_matrix(g, members, k)?;
    let n = m.nrows();
    let (values, vectors) = sorted_eigen(&m)?;
    if values[0] <= zero_tolerance(n, values[n - 1]) {
        return Err(Error::Singular(format!(
            "M = L + K has eigenvalue {:e}",
            values[0]
        )));
    }
    let s2 = sigma * sigma;
    Ok((0..n)
        .map(|i| {
            (0..n)
                .map(|p| vectors[(i, p)].powi(2) / (2.0 * values[p]))
                .sum::<f64>()
                * s2
        })
        .collect())
}
