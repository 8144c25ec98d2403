//! Identity checks: error implied by joint centrality against the dense
//! trace oracle, for every leader set of size `m <= max_m` (noise-free) and
//! every pair under each finite gain.

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::graph::{Graph, LeaderMode};
use crate::joint::{joint_centrality, joint_centrality_two_gain};
use crate::spectral::{compute_kernels, oracle_error_gain, oracle_error_noise_free};
use crate::suite::SuiteGraph;

pub const IDENTITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub max_m: usize,
    pub gains: Vec<f64>,
    pub tol: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            max_m: 3,
            gains: vec![0.1, 1.0, 10.0, 100.0],
            tol: IDENTITY_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub graph: String,
    pub members: Vec<usize>,
    pub mode: LeaderMode,
    pub implied_error: f64,
    pub oracle_error: f64,
    pub rel_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub graphs: usize,
    pub noise_free_checks: u64,
    pub gain_checks: u64,
    pub max_rel_deviation_noise_free: f64,
    pub max_rel_deviation_gain: f64,
    pub violations: Vec<Violation>,
}

impl VerifyReport {
    fn empty() -> Self {
        Self {
            graphs: 0,
            noise_free_checks: 0,
            gain_checks: 0,
            max_rel_deviation_noise_free: 0.0,
            max_rel_deviation_gain: 0.0,
            violations: Vec::new(),
        }
    }

    pub fn max_rel_deviation(&self) -> f64 {
        self.max_rel_deviation_noise_free
            .max(self.max_rel_deviation_gain)
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn merge(mut self, other: Self) -> Self {
        self.graphs += other.graphs;
        self.noise_free_checks += other.noise_free_checks;
        self.gain_checks += other.gain_checks;
        self.max_rel_deviation_noise_free = self
            .max_rel_deviation_noise_free
            .max(other.max_rel_deviation_noise_free);
        self.max_rel_deviation_gain = self
            .max_rel_deviation_gain
            .max(other.max_rel_deviation_gain);
        self.violations.extend(other.violations);
        self
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Checks one graph.
pub fn verify_graph(label: &str, g: &Graph, opts: &VerifyOptions) -> Result<VerifyReport> {
    let n = g.n();
    let kernels = compute_kernels(g)?;
    let mut report = VerifyReport::empty();
    report.graphs = 1;
    for m in 1..=opts.max_m.min(n - 1) {
        for set in (0..n).combinations(m) {
            let implied = joint_centrality(&kernels, &set, set[0])?.implied_total_error;
            let oracle = oracle_error_noise_free(g, &set, 1.0)?.total_error;
            let dev = rel(implied, oracle);
            report.noise_free_checks += 1;
            report.max_rel_deviation_noise_free = report.max_rel_deviation_noise_free.max(dev);
            if dev.is_nan() || dev > opts.tol {
                report.violations.push(Violation {
                    graph: label.to_string(),
                    members: set,
                    mode: LeaderMode::NoiseFree,
                    implied_error: implied,
                    oracle_error: oracle,
                    rel_deviation: dev,
                });
            }
        }
    }
    if n >= 3 {
        for (s1, s2) in (0..n).tuple_combinations() {
            for &k in &opts.gains {
                let implied = joint_centrality_two_gain(&kernels, s1, s2, k)?.implied_total_error;
                let oracle = oracle_error_gain(g, &[s1, s2], k, 1.0)?.total_error;
                let dev = rel(implied, oracle);
                report.gain_checks += 1;
                report.max_rel_deviation_gain = report.max_rel_deviation_gain.max(dev);
                if dev.is_nan() || dev > opts.tol {
                    report.violations.push(Violation {
                        graph: label.to_string(),
                        members: vec![s1, s2],
                        mode: LeaderMode::Gain(k),
                        implied_error: implied,
                        oracle_error: oracle,
                        rel_deviation: dev,
                    });
                }
            }
        }
    }
    Ok(report)
}

/// Checks a suite in parallel; violations keep suite order.
pub fn verify_suite(graphs: &[SuiteGraph], opts: &VerifyOptions) -> Result<VerifyReport> {
    let parts = graphs
        .par_iter()
        .map(|s| verify_graph(&s.label, &s.graph, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(parts
        .into_iter()
        .fold(VerifyReport::empty(), VerifyReport::merge))
}
