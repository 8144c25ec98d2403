//! Optimal leader selection: exhaustive search over m-subsets, a greedy
//! baseline, the closed-form cycle and path placements, and the all-pairs
//! joint-centrality sweep.
//!
//! Every search reports the complete family of tied optima (relative
//! tolerance [`TIE_TOL`]) in lexicographic order; the result never depends on
//! the rayon schedule.

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{self, Graph, LeaderMode};
use crate::joint::{joint_centrality, joint_centrality_two, joint_centrality_two_gain};
use crate::spectral::{compute_kernels, oracle_error_gain, oracle_error_noise_free, GraphKernels};

pub const TIE_TOL: f64 = 1e-9;
pub const DEFAULT_BUDGET: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    /// All m-subsets ranked by joint centrality.
    Exhaustive,
    /// All m-subsets ranked by the dense trace oracle.
    Oracle,
    Greedy,
    ClosedFormCycle,
    ClosedFormCycleTwo,
    ClosedFormPathTwo,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Objective {
    /// `n / tr(M^-1)`; this is the joint centrality whenever one is defined.
    pub rho: f64,
    pub total_error: f64,
}

impl Objective {
    fn from_rho(n: usize, rho: f64, sigma: f64) -> Self {
        Self {
            rho,
            total_error: 0.5 * sigma * sigma * n as f64 / rho,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionResult {
    /// Tied optimal sets, each ascending, listed lexicographically.
    pub optimal_sets: Vec<Vec<usize>>,
    pub objective: Objective,
    pub method: Method,
    pub evaluated_count: u64,
    pub m: usize,
    pub mode: LeaderMode,
}

#[derive(Debug, Clone, Copy)]
pub struct SelectOptions {
    pub sigma: f64,
    /// Maximum number of candidate sets an exhaustive search may evaluate.
    pub budget: u128,
}

impl Default for SelectOptions {
    fn default() -> Self {
        Self {
            sigma: 1.0,
            budget: DEFAULT_BUDGET,
        }
    }
}

pub fn binomial(n: usize, m: usize) -> u128 {
    if m > n {
        return 0;
    }
    let m = m.min(n - m);
    (0..m).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn check_m(n: usize, m: usize, mode: LeaderMode) -> Result<()> {
    if m == 0 || m >= n {
        return Err(Error::InvalidLeaderSet(format!(
            "need 1 <= m < n, got m={m} n={n}"
        )));
    }
    mode.validate()?;
    Ok(())
}

/// Joint centrality for the mode, or `n / tr(M^-1)` from the oracle when no
/// closed form exists (finite gain with more than two leaders).
pub fn set_rho(g: &Graph, kernels: &GraphKernels, set: &[usize], mode: LeaderMode) -> Result<f64> {
    match (mode, set.len()) {
        (LeaderMode::NoiseFree, _) => Ok(joint_centrality(kernels, set, set[0])?.rho),
        (LeaderMode::Gain(k), 1) => {
            // error (n/2)(1/k + 1/c_s)  =>  rho = (1/k + 1/c_s)^-1
            let n = kernels.n() as f64;
            let inv_c = kernels.lplus()[(set[0], set[0])] + kernels.kirchhoff() / (n * n);
            Ok(1.0 / (1.0 / k + inv_c))
        }
        (LeaderMode::Gain(k), 2) => Ok(joint_centrality_two_gain(kernels, set[0], set[1], k)?.rho),
        (LeaderMode::Gain(k), _) => oracle_rho(g, set, LeaderMode::Gain(k)),
    }
}

/// `n / tr(M^-1)` (or `n / tr(L_F^-1)`) from the dense oracle.
pub fn oracle_rho(g: &Graph, set: &[usize], mode: LeaderMode) -> Result<f64> {
    let e = match mode {
        LeaderMode::NoiseFree => oracle_error_noise_free(g, set, 1.0)?.total_error,
        LeaderMode::Gain(k) => oracle_error_gain(g, set, k, 1.0)?.total_error,
    };
    Ok(0.5 * g.n() as f64 / e)
}

/// Argmax with its tie family. Candidates more than [`TIE_TOL`] below the
/// running best are dropped; since the global best is at least any partial
/// best, merging partial results gives the same family in any order.
#[derive(Debug, Clone)]
struct Best {
    value: f64,
    candidates: Vec<(f64, Vec<usize>)>,
    count: u64,
}

impl Best {
    fn new() -> Self {
        Self {
            value: f64::NEG_INFINITY,
            candidates: Vec::new(),
            count: 0,
        }
    }

    fn threshold(value: f64) -> f64 {
        value - TIE_TOL * value.abs()
    }

    fn prune(&mut self) {
        let th = Self::threshold(self.value);
        self.candidates.retain(|(v, _)| *v >= th);
    }

    fn offer(&mut self, value: f64, set: Vec<usize>) {
        self.count += 1;
        if value >= Self::threshold(self.value) {
            self.candidates.push((value, set));
            if value > self.value {
                self.value = value;
                self.prune();
            }
        }
    }

    fn merge(mut self, other: Self) -> Self {
        self.count += other.count;
        self.value = self.value.max(other.value);
        self.candidates.extend(other.candidates);
        self.prune();
        self
    }

    fn into_sets(self) -> (f64, Vec<Vec<usize>>, u64) {
        let mut sets: Vec<Vec<usize>> = self.candidates.into_iter().map(|(_, s)| s).collect();
        sets.sort();
        (self.value, sets, self.count)
    }
}

/// Maximizes `score` over all m-subsets, parallel over the smallest member.
fn enumerate<F>(n: usize, m: usize, budget: u128, score: F) -> Result<Best>
where
    F: Fn(&[usize]) -> Result<f64> + Sync,
{
    let required = binomial(n, m);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let partial: Vec<Result<Best>> = (0..n)
        .into_par_iter()
        .map(|first| {
            let mut best = Best::new();
            for rest in (first + 1..n).combinations(m - 1) {
                let mut set = Vec::with_capacity(m);
                set.push(first);
                set.extend(rest);
                let v = score(&set)?;
                best.offer(v, set);
            }
            Ok(best)
        })
        .collect();
    let mut total = Best::new();
    for p in partial {
        total = total.merge(p?);
    }
    Ok(total)
}

/// Exhaustive search maximizing joint centrality (`rho_S` noise-free,
/// `rho_kS2` for gain with m <= 2, the trace oracle for gain with m > 2).
pub fn exhaustive_select(
    g: &Graph,
    m: usize,
    mode: LeaderMode,
    opts: &SelectOptions,
) -> Result<SelectionResult> {
    check_m(g.n(), m, mode)?;
    let kernels = compute_kernels(g)?;
    let best = enumerate(g.n(), m, opts.budget, |set| set_rho(g, &kernels, set, mode))?;
    let (rho, optimal_sets, evaluated_count) = best.into_sets();
    Ok(SelectionResult {
        optimal_sets,
        objective: Objective::from_rho(g.n(), rho, opts.sigma),
        method: Method::Exhaustive,
        evaluated_count,
        m,
        mode,
    })
}

/// Exhaustive search minimizing the dense trace oracle directly.
pub fn oracle_select(
    g: &Graph,
    m: usize,
    mode: LeaderMode,
    opts: &SelectOptions,
) -> Result<SelectionResult> {
    check_m(g.n(), m, mode)?;
    let best = enumerate(g.n(), m, opts.budget, |set| oracle_rho(g, set, mode))?;
    let (rho, optimal_sets, evaluated_count) = best.into_sets();
    Ok(SelectionResult {
        optimal_sets,
        objective: Objective::from_rho(g.n(), rho, opts.sigma),
        method: Method::Oracle,
        evaluated_count,
        m,
        mode,
    })
}

/// Oracle greedy: adds, one at a time, the node giving the lowest exact total
/// error. Near-ties (within [`TIE_TOL`]) go to the lowest node id.
pub fn greedy_select(
    g: &Graph,
    m: usize,
    mode: LeaderMode,
    opts: &SelectOptions,
) -> Result<SelectionResult> {
    let n = g.n();
    check_m(n, m, mode)?;
    let mut chosen: Vec<usize> = Vec::with_capacity(m);
    let mut evaluated = 0u64;
    let mut best_rho = 0.0;
    for _ in 0..m {
        let mut step: Option<(usize, f64)> = None;
        for v in 0..n {
            if chosen.contains(&v) {
                continue;
            }
            let mut trial = chosen.clone();
            trial.push(v);
            let rho = oracle_rho(g, &trial, mode)?;
            evaluated += 1;
            match step {
                Some((_, best)) if rho <= best + TIE_TOL * best.abs() => {}
                _ => step = Some((v, rho)),
            }
        }
        let (v, rho) = step.expect("m < n leaves a candidate");
        chosen.push(v);
        best_rho = rho;
    }
    chosen.sort_unstable();
    Ok(SelectionResult {
        optimal_sets: vec![chosen],
        objective: Objective::from_rho(n, best_rho, opts.sigma),
        method: Method::Greedy,
        evaluated_count: evaluated,
        m,
        mode,
    })
}

/// Uniform placement of `m` noise-free leaders on `cycle(n)` when `n/m` is an
/// integer. Returns every distinct rotation of `{0, p, 2p, ...}`.
pub fn closed_form_cycle(n: usize, m: usize, opts: &SelectOptions) -> Result<SelectionResult> {
    let g = graph::cycle(n)?;
    check_m(n, m, LeaderMode::NoiseFree)?;
    if !n.is_multiple_of(m) {
        return Err(Error::NotUniform { n, m });
    }
    let p = n / m;
    let optimal_sets: Vec<Vec<usize>> = (0..p)
        .map(|offset| (0..m).map(|j| offset + j * p).collect())
        .collect();
    let rho = oracle_rho(&g, &optimal_sets[0], LeaderMode::NoiseFree)?;
    Ok(SelectionResult {
        optimal_sets,
        objective: Objective::from_rho(n, rho, opts.sigma),
        method: Method::ClosedFormCycle,
        evaluated_count: 1,
        m,
        mode: LeaderMode::NoiseFree,
    })
}

/// Two leaders on an even cycle, either mode: every antipodal pair.
pub fn closed_form_cycle_two(
    n: usize,
    mode: LeaderMode,
    opts: &SelectOptions,
) -> Result<SelectionResult> {
    let g = graph::cycle(n)?;
    mode.validate()?;
    if !n.is_multiple_of(2) {
        return Err(Error::NotUniform { n, m: 2 });
    }
    let half = n / 2;
    let optimal_sets: Vec<Vec<usize>> = (0..half).map(|i| vec![i, i + half]).collect();
    let kernels = compute_kernels(&g)?;
    let rho = set_rho(&g, &kernels, &optimal_sets[0], mode)?;
    Ok(SelectionResult {
        optimal_sets,
        objective: Objective::from_rho(n, rho, opts.sigma),
        method: Method::ClosedFormCycleTwo,
        evaluated_count: 1,
        m: 2,
        mode,
    })
}

/// 0-indexed pair `(rnd(n/5 + 1/2) - 1, rnd(4n/5 + 1/2) - 1)` for the path,
/// with `rnd` rounding halves away from zero.
///
/// Over the integers `rnd((2n + 5)/10) = floor(n/5) + 1` and
/// `rnd((8n + 5)/10) = floor(4n/5) + 1`, so no floating point is involved.
pub fn path_two_pair(n: usize) -> (usize, usize) {
    (n / 5, 4 * n / 5)
}

/// Two noise-free leaders on `path(n)`. Reports the mirrored pair too when it
/// differs (that happens exactly when the continuous optimum sits on a
/// rounding half).
pub fn closed_form_path_two(n: usize, opts: &SelectOptions) -> Result<SelectionResult> {
    if n < 3 {
        return Err(Error::InvalidLeaderSet(format!(
            "two leaders on path({n}) leave no follower"
        )));
    }
    let g = graph::path(n)?;
    let (s1, s2) = path_two_pair(n);
    let mirror = (n - 1 - s2, n - 1 - s1);
    let mut optimal_sets = vec![vec![s1, s2]];
    if mirror != (s1, s2) {
        optimal_sets.push(vec![mirror.0, mirror.1]);
    }
    optimal_sets.sort();
    let kernels = compute_kernels(&g)?;
    let rho = joint_centrality_two(&kernels, s1, s2)?.rho;
    Ok(SelectionResult {
        optimal_sets,
        objective: Objective::from_rho(n, rho, opts.sigma),
        method: Method::ClosedFormPathTwo,
        evaluated_count: 1,
        m: 2,
        mode: LeaderMode::NoiseFree,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairRho {
    pub s1: usize,
    pub s2: usize,
    pub rho: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    /// `bins + 1` ascending bin edges.
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl Histogram {
    /// Equal-width bins over `[min, max]`. A range narrower than
    /// [`TIE_TOL`] relative collapses into a single occupied first bin.
    pub fn from_values(values: &[f64], bins: usize) -> Result<Self> {
        if bins == 0 {
            return Err(Error::InvalidParameter(
                "histogram needs at least one bin".into(),
            ));
        }
        if values.is_empty() {
            return Ok(Self {
                edges: vec![0.0; bins + 1],
                counts: vec![0; bins],
            });
        }
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut counts = vec![0u64; bins];
        if hi - lo <= TIE_TOL * hi.abs().max(lo.abs()) {
            counts[0] = values.len() as u64;
            let mut edges = vec![hi; bins + 1];
            edges[0] = lo;
            return Ok(Self { edges, counts });
        }
        let width = (hi - lo) / bins as f64;
        let edges = (0..=bins)
            .map(|b| if b == bins { hi } else { lo + width * b as f64 })
            .collect();
        for &v in values {
            let b = (((v - lo) / width) as usize).min(bins - 1);
            counts[b] += 1;
        }
        Ok(Self { edges, counts })
    }

    pub fn occupied_bins(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairSweep {
    pub n: usize,
    /// Upper triangle `s1 < s2`, lexicographic unless restricted to a list.
    pub rows: Vec<PairRho>,
    pub histogram: Histogram,
}

impl PairSweep {
    /// Looks up `rho` for an unordered pair.
    pub fn get(&self, a: usize, b: usize) -> Option<f64> {
        let (s1, s2) = (a.min(b), a.max(b));
        self.rows
            .iter()
            .find(|r| r.s1 == s1 && r.s2 == s2)
            .map(|r| r.rho)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SweepOptions {
    pub bins: usize,
    /// Maximum number of pairs.
    pub budget: u128,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            bins: 20,
            budget: DEFAULT_BUDGET,
        }
    }
}

/// Two-node joint centrality for every unordered pair.
pub fn pairwise_sweep(kernels: &GraphKernels, opts: &SweepOptions) -> Result<PairSweep> {
    let n = kernels.n();
    let required = binomial(n, 2);
    if required > opts.budget {
        return Err(Error::BudgetExceeded {
            required,
            budget: opts.budget,
        });
    }
    let rows: Vec<Vec<PairRho>> = (0..n)
        .into_par_iter()
        .map(|s1| {
            (s1 + 1..n)
                .map(|s2| {
                    joint_centrality_two(kernels, s1, s2).map(|r| PairRho { s1, s2, rho: r.rho })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<PairRho> = rows.into_iter().flatten().collect();
    finish_sweep(n, rows, opts.bins)
}

/// Sweep restricted to the listed pairs, in the given order.
pub fn pairwise_sweep_restricted(
    kernels: &GraphKernels,
    pairs: &[(usize, usize)],
    opts: &SweepOptions,
) -> Result<PairSweep> {
    if pairs.len() as u128 > opts.budget {
        return Err(Error::BudgetExceeded {
            required: pairs.len() as u128,
            budget: opts.budget,
        });
    }
    let rows = pairs
        .par_iter()
        .map(|&(a, b)| {
            let (s1, s2) = (a.min(b), a.max(b));
            joint_centrality_two(kernels, s1, s2).map(|r| PairRho { s1, s2, rho: r.rho })
        })
        .collect::<Result<Vec<_>>>()?;
    finish_sweep(kernels.n(), rows, opts.bins)
}

fn finish_sweep(n: usize, rows: Vec<PairRho>, bins: usize) -> Result<PairSweep> {
    let values: Vec<f64> = rows.iter().map(|r| r.rho).collect();
    Ok(PairSweep {
        n,
        histogram: Histogram::from_values(&values, bins)?,
        rows,
    })
}
