//! Euler-Maruyama integration of the leader-follower tracking dynamics
//!
//! ```text
//! dx = -M (x - mu 1) dt + sigma dW,   M = L + K
//! ```
//!
//! With noise-free leaders the leader states are held at `mu` and only the
//! followers integrate `dx_F = -L_F (x_F - mu 1) dt + sigma dW_F`.
//!
//! Randomness: `rand_chacha` 0.9.0 (pinned) `ChaCha8Rng::seed_from_u64(seed)`,
//! replica `r` on stream `r`; Gaussian increments from `rand_distr`'s
//! `StandardNormal` (ziggurat) scaled by `sigma * sqrt(dt)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{check_members, followers, Graph, LeaderMode};
use crate::spectral::{oracle_error_gain, oracle_error_noise_free, sorted_eigen};

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub dt: f64,
    pub steps: u64,
    /// Steps discarded before accumulating moments.
    pub burn_in: u64,
    pub sigma: f64,
    pub seed: u64,
    /// External signal.
    pub mu: f64,
    pub mode: LeaderMode,
    /// Starting state; defaults to `mu` everywhere.
    pub initial: Option<Vec<f64>>,
}

impl SimConfig {
    /// `dt = 0.01`, two million steps, 10% burn-in, `sigma = 1`, `mu = 0`.
    pub fn new(mode: LeaderMode) -> Self {
        let steps = 2_000_000;
        Self {
            dt: 0.01,
            steps,
            burn_in: steps / 10,
            sigma: 1.0,
            seed: 0,
            mu: 0.0,
            mode,
            initial: None,
        }
    }

    /// Sets `steps` and resets burn-in to 10% of it.
    pub fn with_steps(mut self, steps: u64) -> Self {
        self.steps = steps;
        self.burn_in = steps / 10;
        self
    }

    fn validate(&self, n: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return bad(format!("dt must be positive, got {}", self.dt));
        }
        if self.steps == 0 || self.burn_in >= self.steps {
            return bad(format!(
                "need 0 <= burn_in < steps, got burn_in={} steps={}",
                self.burn_in, self.steps
            ));
        }
        if !(self.sigma.is_finite() && self.sigma >= 0.0) {
            return bad(format!("sigma must be nonnegative, got {}", self.sigma));
        }
        if !self.mu.is_finite() {
            return bad(format!("mu must be finite, got {}", self.mu));
        }
        if let Some(x0) = &self.initial {
            if x0.len() != n || x0.iter().any(|v| !v.is_finite()) {
                return bad(format!("initial state must hold {n} finite values"));
            }
        }
        self.mode.validate()?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimResult {
    /// Mean of `(x_i - mu)^2` over post-burn-in samples.
    pub empirical_variance: Vec<f64>,
    pub empirical_total_error: f64,
    pub analytic_total_error: f64,
    pub sample_count: u64,
    pub seed_used: u64,
    pub replicas: u64,
}

impl SimResult {
    pub fn relative_gap(&self) -> f64 {
        (self.empirical_total_error - self.analytic_total_error).abs() / self.analytic_total_error
    }
}

/// Sparse drift `A` restricted to the integrated nodes.
struct Drift {
    /// Graph node id of each integrated slot.
    active: Vec<usize>,
    diag: Vec<f64>,
    /// `(slot, weight)` for integrated neighbors.
    neighbors: Vec<Vec<(usize, f64)>>,
}

impl Drift {
    fn build(g: &Graph, members: &[usize], mode: LeaderMode) -> Self {
        let n = g.n();
        let active = match mode {
            LeaderMode::NoiseFree => followers(members, n),
            LeaderMode::Gain(_) => (0..n).collect(),
        };
        let mut slot = vec![usize::MAX; n];
        for (a, &i) in active.iter().enumerate() {
            slot[i] = a;
        }
        let gain = match mode {
            LeaderMode::Gain(k) => k,
            LeaderMode::NoiseFree => 0.0,
        };
        let diag = active
            .iter()
            .map(|&i| g.weighted_degree(i) + if members.contains(&i) { gain } else { 0.0 })
            .collect();
        let neighbors = active
            .iter()
            .map(|&i| {
                g.neighbors(i)
                    .iter()
                    .filter(|&&(j, _)| slot[j] != usize::MAX)
                    .map(|&(j, w)| (slot[j], w))
                    .collect()
            })
            .collect();
        Self {
            active,
            diag,
            neighbors,
        }
    }

    fn dense(&self) -> nalgebra::DMatrix<f64> {
        let d = self.active.len();
        let mut m = nalgebra::DMatrix::zeros(d, d);
        for a in 0..d {
            m[(a, a)] = self.diag[a];
            for &(b, w) in &self.neighbors[a] {
                m[(a, b)] = -w;
            }
        }
        m
    }
}

fn check_leaders(g: &Graph, members: &[usize], mode: LeaderMode) -> Result<()> {
    if members.is_empty() {
        return Err(Error::InvalidLeaderSet(
            "at least one leader is needed for a stable steady state".into(),
        ));
    }
    check_members(members, g.n())?;
    if mode == LeaderMode::NoiseFree && members.len() >= g.n() {
        return Err(Error::InvalidLeaderSet(
            "noise-free run needs a follower".into(),
        ));
    }
    Ok(())
}

/// Largest step size `2 / lambda_max` for which explicit Euler contracts.
pub fn stability_bound(g: &Graph, members: &[usize], mode: LeaderMode) -> Result<f64> {
    check_leaders(g, members, mode.validate()?)?;
    let drift = Drift::build(g, members, mode);
    let (values, _) = sorted_eigen(&drift.dense())?;
    Ok(2.0 / values[values.len() - 1])
}

struct Moments {
    sum_sq: Vec<f64>,
    count: u64,
}

fn run_trajectory(drift: &Drift, cfg: &SimConfig, stream: u64) -> Result<Moments> {
    let d = drift.active.len();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(stream);
    let mut y: Vec<f64> = match &cfg.initial {
        Some(x0) => drift.active.iter().map(|&i| x0[i] - cfg.mu).collect(),
        None => vec![0.0; d],
    };
    let mut next = vec![0.0; d];
    let mut sum_sq = vec![0.0; d];
    let noise = cfg.sigma * cfg.dt.sqrt();
    for step in 0..cfg.steps {
        for a in 0..d {
            let coupling: f64 = drift.neighbors[a].iter().map(|&(b, w)| w * y[b]).sum();
            let xi: f64 = rng.sample(StandardNormal);
            next[a] = y[a] - cfg.dt * (drift.diag[a] * y[a] - coupling) + noise * xi;
        }
        std::mem::swap(&mut y, &mut next);
        if step % 1024 == 0 && y.iter().any(|v| v.is_nan() || v.abs() >= 1e150) {
            return Err(Error::Diverged { step });
        }
        if step >= cfg.burn_in {
            for (s, v) in sum_sq.iter_mut().zip(&y) {
                *s += v * v;
            }
        }
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::Diverged { step: cfg.steps });
    }
    Ok(Moments {
        sum_sq,
        count: cfg.steps - cfg.burn_in,
    })
}

/// One trajectory on stream 0.
pub fn simulate(g: &Graph, members: &[usize], cfg: &SimConfig) -> Result<SimResult> {
    simulate_replicas(g, members, cfg, 1)
}

/// Independent trajectories on streams `0..replicas`, run in parallel and
/// pooled by summing second moments.
pub fn simulate_replicas(
    g: &Graph,
    members: &[usize],
    cfg: &SimConfig,
    replicas: u64,
) -> Result<SimResult> {
    cfg.validate(g.n())?;
    check_leaders(g, members, cfg.mode)?;
    if replicas == 0 {
        return Err(Error::InvalidParameter("replicas must be positive".into()));
    }
    let bound = stability_bound(g, members, cfg.mode)?;
    if cfg.dt >= bound {
        return Err(Error::Unstable { dt: cfg.dt, bound });
    }
    let drift = Drift::build(g, members, cfg.mode);
    let runs = (0..replicas)
        .into_par_iter()
        .map(|r| run_trajectory(&drift, cfg, r))
        .collect::<Result<Vec<_>>>()?;
    let d = drift.active.len();
    let mut pooled = vec![0.0; d];
    let mut count = 0;
    for run in &runs {
        for (p, s) in pooled.iter_mut().zip(&run.sum_sq) {
            *p += s;
        }
        count += run.count;
    }
    let mut variance = vec![0.0; g.n()];
    for (a, &i) in drift.active.iter().enumerate() {
        variance[i] = pooled[a] / count as f64;
    }
    let analytic = match cfg.mode {
        LeaderMode::NoiseFree => oracle_error_noise_free(g, members, cfg.sigma)?,
        LeaderMode::Gain(k) => oracle_error_gain(g, members, k, cfg.sigma)?,
    };
    Ok(SimResult {
        empirical_total_error: variance.iter().sum(),
        empirical_variance: variance,
        analytic_total_error: analytic.total_error,
        sample_count: count,
        seed_used: cfg.seed,
        replicas,
    })
}
