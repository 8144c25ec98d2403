//! Joint centrality of a node set.
//!
//! For noise-free leaders `S` with pivot `l1` the total system error is
//! `(sigma^2 / 2) n / rho_S` where
//!
//! ```text
//! rho_S = n (K_f/n + n det(G) det(L+_S) + 1/2 tr(Q) - 1^T Q e_l1)^-1
//! N^-1_ij = L+_ij - L+_il1 - L+_jl1 + L+_l1l1
//! G = (N^-1 restricted to S \ {l1})^-1,   Q = [0 0; 0 G] Gamma_S
//! ```
//!
//! The biharmonic part is evaluated from its explicit sum over all `n` nodes,
//!
//! ```text
//! -sum_{a,b in S\l1} G_ab * 1/2 sum_i [(L+_il1 - L+_ia)^2 + (L+_il1 - L+_ib)^2 - (L+_ia - L+_ib)^2]
//! ```
//!
//! and the compact `Q` form is kept alongside as a cross-check
//! ([`JointTerms::form_discrepancy`]). A single leader degenerates to
//! `det(G) = 1`, `Q = 0`, giving `rho = c_l1`.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{check_members, LeaderMode, LeaderSet};
use crate::spectral::GraphKernels;

/// Relative size of a determinant (against the product of its diagonal) below
/// which a conditioning warning is attached.
pub const DET_WARN_RATIO: f64 = 1e-12;

/// Intermediate quantities of the joint-centrality bracket.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointTerms {
    pub kirchhoff_over_n: f64,
    pub det_g: f64,
    pub det_lplus_s: f64,
    /// `tr(Q)`.
    pub trace_q: f64,
    /// `1^T Q e_l1`.
    pub q_pivot: f64,
    /// Biharmonic contribution from the explicit node sum; equals
    /// `1/2 tr(Q) - q_pivot` up to rounding.
    pub gamma_term: f64,
    /// `|gamma_term - (1/2 tr(Q) - q_pivot)|`.
    pub form_discrepancy: f64,
    /// `n (1 + k (L+_11 + L+_22)) / (k (2 + k r))` for finite-gain pairs, else 0.
    pub gain_term: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ConditioningWarning {
    /// `det(N^-1_{S\l1})` is tiny relative to the product of its diagonal.
    PivotBlock { det: f64, scale: f64 },
    /// `det(L+_S)` is tiny relative to the product of its diagonal.
    LeaderBlock { det: f64, scale: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointCentralityResult {
    pub members: Vec<usize>,
    pub pivot_used: usize,
    pub mode: LeaderMode,
    pub rho: f64,
    /// `(1/2) n / rho`, the total system error at `sigma = 1`.
    pub implied_total_error: f64,
    pub terms: JointTerms,
    pub warnings: Vec<ConditioningWarning>,
}

impl JointCentralityResult {
    /// Total system error `(sigma^2 / 2) n / rho`.
    pub fn total_error(&self, sigma: f64) -> f64 {
        self.implied_total_error * sigma * sigma
    }
}

fn check_node(kernels: &GraphKernels, node: usize) -> Result<()> {
    if node >= kernels.n() {
        return Err(Error::NodeOutOfRange {
            line: None,
            node,
            n: kernels.n(),
        });
    }
    Ok(())
}

/// `N^-1` with pivot `l1`: the inverse of the Laplacian grounded at `l1`,
/// bordered by a zero row and column at `l1`.
pub fn n_inverse_entries(kernels: &GraphKernels, l1: usize) -> Result<DMatrix<f64>> {
    check_node(kernels, l1)?;
    let p = kernels.lplus();
    let n = kernels.n();
    Ok(DMatrix::from_fn(n, n, |i, j| {
        p[(i, j)] - p[(i, l1)] - p[(j, l1)] + p[(l1, l1)]
    }))
}

/// Determinant by partial-pivot LU plus the product of the diagonal, which
/// bounds the determinant of a positive-definite matrix (Hadamard).
fn det_with_scale(m: &DMatrix<f64>) -> (f64, f64) {
    let scale = m.diagonal().iter().product::<f64>();
    (m.clone().lu().determinant(), scale)
}

fn biharmonic(l2p: &DMatrix<f64>, i: usize, j: usize) -> f64 {
    if i == j {
        0.0
    } else {
        l2p[(i, i)] + l2p[(j, j)] - 2.0 * l2p[(i, j)]
    }
}

/// Joint centrality `rho_S` of `members` with the given pivot.
pub fn joint_centrality(
    kernels: &GraphKernels,
    members: &[usize],
    pivot: usize,
) -> Result<JointCentralityResult> {
    let n = kernels.n();
    let m = members.len();
    if m == 0 || m >= n {
        return Err(Error::InvalidLeaderSet(format!(
            "joint centrality needs 1 <= m < n, got m={m} n={n}"
        )));
    }
    check_members(members, n)?;
    if !members.contains(&pivot) {
        return Err(Error::InvalidLeaderSet(format!(
            "pivot {pivot} is not a member of {members:?}"
        )));
    }
    let p = kernels.lplus();
    let l2p = kernels.l2plus();
    let rest: Vec<usize> = members.iter().copied().filter(|&s| s != pivot).collect();
    let mut warnings = Vec::new();

    // G = (N^-1 on S \ l1)^-1; the empty block has determinant 1.
    let (g, det_g) = if rest.is_empty() {
        (DMatrix::zeros(0, 0), 1.0)
    } else {
        let block = DMatrix::from_fn(rest.len(), rest.len(), |a, b| {
            let (i, j) = (rest[a], rest[b]);
            p[(i, j)] - p[(i, pivot)] - p[(j, pivot)] + p[(pivot, pivot)]
        });
        let (det, scale) = det_with_scale(&block);
        if !(det.is_finite() && det > 0.0) {
            return Err(Error::Singular(format!(
                "N^-1 block on {rest:?} has determinant {det:e}"
            )));
        }
        if det < DET_WARN_RATIO * scale {
            warnings.push(ConditioningWarning::PivotBlock { det, scale });
        }
        let g = block
            .try_inverse()
            .ok_or_else(|| Error::Singular(format!("N^-1 block on {rest:?}")))?;
        (g, 1.0 / det)
    };

    let ordered: Vec<usize> = std::iter::once(pivot).chain(rest.iter().copied()).collect();
    let lplus_s = DMatrix::from_fn(m, m, |a, b| p[(ordered[a], ordered[b])]);
    let (det_lplus_s, scale) = det_with_scale(&lplus_s);
    if det_lplus_s.abs() < DET_WARN_RATIO * scale.abs() {
        warnings.push(ConditioningWarning::LeaderBlock {
            det: det_lplus_s,
            scale,
        });
    }

    // Explicit node sum for the biharmonic contribution.
    let mut gamma_sum = 0.0;
    for (a, &sa) in rest.iter().enumerate() {
        for (b, &sb) in rest.iter().enumerate() {
            let bracket: f64 = (0..n)
                .map(|i| {
                    let x = p[(i, pivot)] - p[(i, sa)];
                    let y = p[(i, pivot)] - p[(i, sb)];
                    let z = p[(i, sa)] - p[(i, sb)];
                    x * x + y * y - z * z
                })
                .sum();
            gamma_sum += g[(a, b)] * 0.5 * bracket;
        }
    }
    let gamma_term = -gamma_sum;

    // Compact form: Q = Gbar Gamma_S with the pivot in slot 0.
    let mut trace_q = 0.0;
    let mut q_pivot = 0.0;
    for (a, _) in rest.iter().enumerate() {
        for (b, &sb) in rest.iter().enumerate() {
            let gab = g[(a, b)];
            trace_q += gab * biharmonic(l2p, sb, rest[a]);
            q_pivot += gab * biharmonic(l2p, sb, pivot);
        }
    }

    let kirchhoff_over_n = kernels.kirchhoff() / n as f64;
    let nf = n as f64;
    let bracket = kirchhoff_over_n + nf * det_g * det_lplus_s + gamma_term;
    if !(bracket.is_finite() && bracket > 0.0) {
        return Err(Error::Singular(format!(
            "joint-centrality bracket evaluated to {bracket:e}"
        )));
    }
    let rho = nf / bracket;
    Ok(JointCentralityResult {
        members: members.to_vec(),
        pivot_used: pivot,
        mode: LeaderMode::NoiseFree,
        rho,
        implied_total_error: 0.5 * bracket,
        terms: JointTerms {
            kirchhoff_over_n,
            det_g,
            det_lplus_s,
            trace_q,
            q_pivot,
            gamma_term,
            form_discrepancy: (gamma_term - (0.5 * trace_q - q_pivot)).abs(),
            gain_term: 0.0,
        },
        warnings,
    })
}

/// Joint centrality of a leader set using its own pivot. The set must be
/// noise-free; finite gains only have a closed form for one or two leaders
/// (see [`joint_centrality_two_gain`]).
pub fn joint_centrality_set(
    kernels: &GraphKernels,
    leaders: &LeaderSet,
) -> Result<JointCentralityResult> {
    match leaders.mode() {
        LeaderMode::NoiseFree => joint_centrality(kernels, leaders.members(), leaders.pivot()),
        LeaderMode::Gain(_) => Err(Error::InvalidLeaderSet(
            "joint centrality of a general set is defined for noise-free leaders".into(),
        )),
    }
}

struct PairParts {
    p11: f64,
    p22: f64,
    p12: f64,
    r: f64,
    gamma: f64,
}

fn pair_parts(kernels: &GraphKernels, s1: usize, s2: usize) -> Result<PairParts> {
    check_node(kernels, s1)?;
    check_node(kernels, s2)?;
    if s1 == s2 {
        return Err(Error::InvalidLeaderSet(format!(
            "two-leader set needs distinct nodes, got {s1} twice"
        )));
    }
    if kernels.n() < 3 {
        return Err(Error::InvalidLeaderSet(
            "two leaders need at least one follower (n >= 3)".into(),
        ));
    }
    let p = kernels.lplus();
    let (p11, p22, p12) = (p[(s1, s1)], p[(s2, s2)], p[(s1, s2)]);
    Ok(PairParts {
        p11,
        p22,
        p12,
        r: p11 + p22 - 2.0 * p12,
        gamma: biharmonic(kernels.l2plus(), s1, s2),
    })
}

/// Two noise-free leaders:
/// `rho = n (K_f/n + (n L+_11 L+_22 - n L+_12^2 - gamma_12) / r_12)^-1`.
pub fn joint_centrality_two(
    kernels: &GraphKernels,
    s1: usize,
    s2: usize,
) -> Result<JointCentralityResult> {
    let PairParts {
        p11,
        p22,
        p12,
        r,
        gamma,
    } = pair_parts(kernels, s1, s2)?;
    let nf = kernels.n() as f64;
    let kirchhoff_over_n = kernels.kirchhoff() / nf;
    let det_lplus_s = p11 * p22 - p12 * p12;
    let bracket = kirchhoff_over_n + (nf * det_lplus_s - gamma) / r;
    Ok(JointCentralityResult {
        members: vec![s1, s2],
        pivot_used: s1,
        mode: LeaderMode::NoiseFree,
        rho: nf / bracket,
        implied_total_error: 0.5 * bracket,
        terms: JointTerms {
            kirchhoff_over_n,
            det_g: 1.0 / r,
            det_lplus_s,
            trace_q: 0.0,
            q_pivot: gamma / r,
            gamma_term: -gamma / r,
            form_discrepancy: 0.0,
            gain_term: 0.0,
        },
        warnings: Vec::new(),
    })
}

/// k-dependent joint centrality of two leaders with finite gain `k`:
///
/// ```text
/// rho_k = n (K_f/n + n (1 + k (L+_11 + L+_22)) / (k (2 + k r))
///              + (n k^2 (L+_11 L+_22 - L+_12^2) - k^2 gamma) / (k (2 + k r)))^-1
/// ```
pub fn joint_centrality_two_gain(
    kernels: &GraphKernels,
    s1: usize,
    s2: usize,
    k: f64,
) -> Result<JointCentralityResult> {
    LeaderMode::Gain(k).validate()?;
    let PairParts {
        p11,
        p22,
        p12,
        r,
        gamma,
    } = pair_parts(kernels, s1, s2)?;
    let nf = kernels.n() as f64;
    let kirchhoff_over_n = kernels.kirchhoff() / nf;
    let denom = k * (2.0 + k * r);
    let det_lplus_s = p11 * p22 - p12 * p12;
    // k / (2 + k r) plays the role of det(G) = 1 / r.
    let det_g = k / (2.0 + k * r);
    let gain_term = nf * (1.0 + k * (p11 + p22)) / denom;
    let q_pivot = k * k * gamma / denom;
    let bracket = kirchhoff_over_n + gain_term + nf * det_g * det_lplus_s - q_pivot;
    Ok(JointCentralityResult {
        members: vec![s1, s2],
        pivot_used: s1,
        mode: LeaderMode::Gain(k),
        rho: nf / bracket,
        implied_total_error: 0.5 * bracket,
        terms: JointTerms {
            kirchhoff_over_n,
            det_g,
            det_lplus_s,
            trace_q: 0.0,
            q_pivot,
            gamma_term: -q_pivot,
            form_discrepancy: 0.0,
            gain_term,
        },
        warnings: Vec::new(),
    })
}

/// Single leader with centrality `c_s`: total error `(n sigma^2 / 2) / c_s`
/// when noise-free, `(n sigma^2 / 2)(1/k + 1/c_s)` with gain `k`.
pub fn single_leader_error(
    kernels: &GraphKernels,
    s: usize,
    mode: LeaderMode,
    sigma: f64,
) -> Result<f64> {
    check_node(kernels, s)?;
    let n = kernels.n() as f64;
    // 1 / c_s = L+_ss + K_f / n^2
    let inv_c = kernels.lplus()[(s, s)] + kernels.kirchhoff() / (n * n);
    let half = 0.5 * sigma * sigma * n;
    match mode.validate()? {
        LeaderMode::NoiseFree => Ok(half * inv_c),
        LeaderMode::Gain(k) => Ok(half * (1.0 / k + inv_c)),
    }
}
