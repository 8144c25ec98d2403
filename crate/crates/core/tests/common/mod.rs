//! Dense reference computations shared by the integration tests. These use
//! only plain LU / SVD from nalgebra and never call into the library's own
//! oracles.
#![allow(dead_code)]

use leadsel_core::Graph;
use nalgebra::DMatrix;

pub fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs().max(a.abs())
    }
}

pub fn laplacian(g: &Graph) -> DMatrix<f64> {
    let n = g.n();
    let mut l = DMatrix::zeros(n, n);
    for e in g.edges() {
        l[(e.u, e.v)] -= e.weight;
        l[(e.v, e.u)] -= e.weight;
        l[(e.u, e.u)] += e.weight;
        l[(e.v, e.v)] += e.weight;
    }
    l
}

fn half_trace_inverse(m: DMatrix<f64>) -> f64 {
    0.5 * m.try_inverse().expect("nonsingular").trace()
}

/// `(1/2) tr(L_F^-1)` with `L_F` the Laplacian minus leader rows/columns.
pub fn noise_free_error(g: &Graph, leaders: &[usize]) -> f64 {
    let followers: Vec<usize> = (0..g.n()).filter(|i| !leaders.contains(i)).collect();
    let l = laplacian(g);
    half_trace_inverse(l.select_rows(&followers).select_columns(&followers))
}

/// `(1/2) tr((L + k I_S)^-1)`.
pub fn gain_error(g: &Graph, leaders: &[usize], k: f64) -> f64 {
    let mut m = laplacian(g);
    for &s in leaders {
        m[(s, s)] += k;
    }
    half_trace_inverse(m)
}

/// Moore-Penrose inverse through SVD.
pub fn pinv(m: &DMatrix<f64>) -> DMatrix<f64> {
    let eps = 1e-10 * m.norm();
    m.clone().pseudo_inverse(eps).expect("svd")
}

/// `L+ = (L + J/n)^-1 - J/n`.
pub fn lplus_shifted(g: &Graph) -> DMatrix<f64> {
    let n = g.n();
    let j = DMatrix::from_element(n, n, 1.0 / n as f64);
    (laplacian(g) + &j).try_inverse().expect("nonsingular") - j
}

pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).amax()
}

/// Indices within `tol` relative of the extreme value picked by `better`.
pub fn best_family(values: &[f64], maximize: bool, tol: f64) -> Vec<usize> {
    let best = if maximize {
        values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    } else {
        values.iter().copied().fold(f64::INFINITY, f64::min)
    };
    (0..values.len())
        .filter(|&i| (values[i] - best).abs() <= tol * best.abs())
        .collect()
}
