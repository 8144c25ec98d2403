//! Node and pairwise measures built from `L+`: information centrality,
//! node certainty, resistance distance and (unnormalized) biharmonic distance.

use nalgebra::{DMatrix, DVector};

use crate::spectral::GraphKernels;

/// Per-node and pairwise measures for one graph.
#[derive(Debug, Clone)]
pub struct CentralityReport {
    /// `c_i = n / sum_j r_ij`.
    pub info_centrality: DVector<f64>,
    /// `(sigma^2 / 2) L+_ii`, the inverse of node certainty.
    pub certainty_inverse: DVector<f64>,
    /// Resistance distances `r_ij`.
    pub resistance: DMatrix<f64>,
    /// Squared biharmonic distances `gamma_ij`; the metric is `sqrt(gamma)`.
    pub biharmonic: DMatrix<f64>,
}

pub fn centrality_report(kernels: &GraphKernels, sigma: f64) -> CentralityReport {
    let resistance = resistance_matrix(kernels);
    CentralityReport {
        info_centrality: info_centrality_from(&resistance),
        certainty_inverse: certainty_inverse(kernels, sigma),
        biharmonic: biharmonic_matrix(kernels),
        resistance,
    }
}

/// `d_ij = P_ii + P_jj - 2 P_ij` for a symmetric kernel `P`, with an exact
/// zero diagonal.
fn quadratic_form_distance(p: &DMatrix<f64>) -> DMatrix<f64> {
    let n = p.nrows();
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            0.0
        } else {
            // identical for (i, j) and (j, i) since p is symmetric
            p[(i, i)] + p[(j, j)] - 2.0 * p[(i, j)]
        }
    })
}

/// Effective resistance `r_ij = L+_ii + L+_jj - 2 L+_ij`.
pub fn resistance_matrix(kernels: &GraphKernels) -> DMatrix<f64> {
    quadratic_form_distance(kernels.lplus())
}

/// `gamma_ij = (e_i - e_j)^T (L^2)+ (e_i - e_j)`.
pub fn biharmonic_matrix(kernels: &GraphKernels) -> DMatrix<f64> {
    quadratic_form_distance(kernels.l2plus())
}

/// `sum_{l>=2} (v_l^i - v_l^j)^2 / lambda_l^power` from the eigenpairs.
fn spectral_distance(kernels: &GraphKernels, power: i32) -> DMatrix<f64> {
    let n = kernels.n();
    let vals = kernels.eigenvalues();
    let vecs = kernels.eigenvectors();
    DMatrix::from_fn(n, n, |i, j| {
        let (a, b) = (i.min(j), i.max(j));
        (1..n)
            .map(|l| (vecs[(a, l)] - vecs[(b, l)]).powi(2) / vals[l].powi(power))
            .sum()
    })
}

/// Resistance distance from the Laplacian spectrum.
pub fn resistance_matrix_spectral(kernels: &GraphKernels) -> DMatrix<f64> {
    spectral_distance(kernels, 1)
}

/// Biharmonic distance from the Laplacian spectrum.
pub fn biharmonic_matrix_spectral(kernels: &GraphKernels) -> DMatrix<f64> {
    spectral_distance(kernels, 2)
}

/// Information centrality: harmonic mean of total information, i.e.
/// `c_i = ((1/n) sum_j r_ij)^-1`.
pub fn info_centrality(kernels: &GraphKernels) -> DVector<f64> {
    info_centrality_from(&resistance_matrix(kernels))
}

fn info_centrality_from(resistance: &DMatrix<f64>) -> DVector<f64> {
    let n = resistance.nrows() as f64;
    DVector::from_iterator(
        resistance.nrows(),
        resistance.row_iter().map(|row| n / row.sum()),
    )
}

/// `(sigma^2 / 2) L+_ii = (sigma^2 / 2)(1/c_i - K_f / n^2)`.
pub fn certainty_inverse(kernels: &GraphKernels, sigma: f64) -> DVector<f64> {
    kernels.lplus().diagonal() * (0.5 * sigma * sigma)
}
