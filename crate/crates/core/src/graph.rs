//! Undirected weighted graphs, the edge-list wire format, generators and
//! leader sets.
//!
//! Edge-list format (UTF-8, whitespace separated):
//!
//! ```text
//! # comment
//! n=5          optional; overrides max id + 1
//! 0 1          unit weight
//! 1 2 2.5      explicit weight
//! ```

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An undirected edge with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

/// Connected undirected graph with strictly positive edge weights.
///
/// Edges are stored normalized (`u < v`) and sorted, so two graphs with the
/// same edge set compare equal regardless of input order.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(usize, f64)>>,
}

impl Graph {
    /// Builds and validates a graph from `(u, v, w)` triples.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let mut builder = Builder::default();
        for (u, v, w) in edges {
            builder.push(u, v, w, None)?;
        }
        builder.finish(n)
    }

    /// Unit-weight convenience constructor.
    pub fn unweighted(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::new(n, edges.into_iter().map(|(u, v)| (u, v, 1.0)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Neighbors of `i` with edge weights, sorted by neighbor id.
    pub fn neighbors(&self, i: usize) -> &[(usize, f64)] {
        &self.adjacency[i]
    }

    pub fn weighted_degree(&self, i: usize) -> f64 {
        self.adjacency[i].iter().map(|&(_, w)| w).sum()
    }

    /// Combinatorial Laplacian `L = D - A`.
    ///
    /// Each off-diagonal pair is written from a single value, so the result is
    /// symmetric bit for bit.
    pub fn laplacian(&self) -> DMatrix<f64> {
        let mut l = DMatrix::zeros(self.n, self.n);
        for e in &self.edges {
            l[(e.u, e.v)] = -e.weight;
            l[(e.v, e.u)] = -e.weight;
        }
        for i in 0..self.n {
            l[(i, i)] = self.weighted_degree(i);
        }
        l
    }

    /// Parses the edge-list format. Node ids are 0-indexed.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut builder = Builder::default();
        let mut header_n = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(rest) = content.strip_prefix("n=") {
                let n = rest.trim().parse::<usize>().map_err(|_| Error::Malformed {
                    line,
                    message: format!("bad node-count header {content:?}"),
                })?;
                if header_n.replace(n).is_some() {
                    return Err(Error::Malformed {
                        line,
                        message: "repeated n= header".into(),
                    });
                }
                continue;
            }
            let fields: Vec<&str> = content.split_whitespace().collect();
            if fields.len() != 2 && fields.len() != 3 {
                return Err(Error::Malformed {
                    line,
                    message: format!("expected \"u v\" or \"u v w\", got {content:?}"),
                });
            }
            let node = |s: &str| {
                s.parse::<usize>().map_err(|_| Error::Malformed {
                    line,
                    message: format!("bad node id {s:?}"),
                })
            };
            let u = node(fields[0])?;
            let v = node(fields[1])?;
            let w = match fields.get(2) {
                Some(s) => s.parse::<f64>().map_err(|_| Error::Malformed {
                    line,
                    message: format!("bad weight {s:?}"),
                })?,
                None => 1.0,
            };
            builder.push(u, v, w, Some(line))?;
        }
        let n = header_n.unwrap_or_else(|| builder.max_id.map_or(0, |m| m + 1));
        builder.finish(n)
    }

    /// Canonical serialization: `n=` header then sorted `u v w` lines, `u < v`.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("n={}\n", self.n);
        for e in &self.edges {
            let _ = writeln!(out, "{} {} {}", e.u, e.v, e.weight);
        }
        out
    }

    /// Same topology with every weight multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.n,
            self.edges.iter().map(|e| (e.u, e.v, e.weight * factor)),
        )
    }

    /// True iff the graph is an unweighted cycle on its node ids in order
    /// `0-1-...-(n-1)-0`.
    pub fn is_cycle(&self) -> bool {
        self.n >= 3 && *self == cycle(self.n).expect("n >= 3")
    }

    /// True iff the graph is the unweighted path `0-1-...-(n-1)`.
    pub fn is_path(&self) -> bool {
        *self == path(self.n).expect("graph has n >= 2")
    }
}

#[derive(Default)]
struct Builder {
    edges: BTreeMap<(usize, usize), f64>,
    max_id: Option<usize>,
}

impl Builder {
    fn push(&mut self, u: usize, v: usize, w: f64, line: Option<usize>) -> Result<()> {
        if u == v {
            return Err(Error::SelfLoop { line, node: u });
        }
        if !(w.is_finite() && w > 0.0) {
            return Err(Error::NonPositiveWeight {
                line,
                u,
                v,
                weight: w,
            });
        }
        let key = (u.min(v), u.max(v));
        if self.edges.insert(key, w).is_some() {
            return Err(Error::DuplicateEdge { line, u, v });
        }
        self.max_id = Some(self.max_id.map_or(key.1, |m| m.max(key.1)));
        Ok(())
    }

    fn finish(self, n: usize) -> Result<Graph> {
        if n < 2 {
            return Err(Error::TooFewNodes { n, min: 2 });
        }
        if let Some(max) = self.max_id {
            if max >= n {
                return Err(Error::NodeOutOfRange {
                    line: None,
                    node: max,
                    n,
                });
            }
        }
        let edges: Vec<Edge> = self
            .edges
            .into_iter()
            .map(|((u, v), weight)| Edge { u, v, weight })
            .collect();
        let mut adjacency = vec![Vec::new(); n];
        for e in &edges {
            adjacency[e.u].push((e.v, e.weight));
            adjacency[e.v].push((e.u, e.weight));
        }
        for a in &mut adjacency {
            a.sort_by_key(|&(j, _)| j);
        }
        let g = Graph {
            n,
            edges,
            adjacency,
        };
        g.check_connected()?;
        Ok(g)
    }
}

impl Graph {
    fn check_connected(&self) -> Result<()> {
        let labels = self.component_labels();
        let components = labels.iter().max().map_or(0, |&c| c + 1);
        if components > 1 {
            let unreachable = labels.iter().position(|&c| c != 0).expect("components > 1");
            return Err(Error::Disconnected {
                components,
                unreachable,
            });
        }
        Ok(())
    }

    fn component_labels(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.n];
        let mut next = 0;
        let mut queue = VecDeque::new();
        for start in 0..self.n {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = next;
            queue.push_back(start);
            while let Some(i) = queue.pop_front() {
                for &(j, _) in &self.adjacency[i] {
                    if label[j] == usize::MAX {
                        label[j] = next;
                        queue.push_back(j);
                    }
                }
            }
            next += 1;
        }
        label
    }
}

/// Cycle `0-1-...-(n-1)-0`. Needs `n >= 3` (a 2-cycle would be a multigraph).
pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::TooFewNodes { n, min: 3 });
    }
    Graph::unweighted(n, (0..n).map(|i| (i, (i + 1) % n)))
}

/// Path `0-1-...-(n-1)`.
pub fn path(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::TooFewNodes { n, min: 2 });
    }
    Graph::unweighted(n, (0..n - 1).map(|i| (i, i + 1)))
}

pub fn complete(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::TooFewNodes { n, min: 2 });
    }
    Graph::unweighted(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
}

/// Attempts per [`erdos_renyi`] call before giving up.
pub const ER_MAX_ATTEMPTS: usize = 1000;

/// G(n, p) conditioned on connectivity, by rejection.
///
/// Deterministic for a fixed seed: the generator is ChaCha8 and every attempt
/// draws the `n(n-1)/2` pair coins in `(i, j)` lexicographic order.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    erdos_renyi_with(n, p, &mut rng)
}

pub(crate) fn erdos_renyi_with(n: usize, p: f64, rng: &mut impl Rng) -> Result<Graph> {
    if n < 2 {
        return Err(Error::TooFewNodes { n, min: 2 });
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "edge probability must lie in (0, 1], got {p}"
        )));
    }
    for _ in 0..ER_MAX_ATTEMPTS {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.random::<f64>() < p {
                    edges.push((i, j));
                }
            }
        }
        match Graph::unweighted(n, edges) {
            Ok(g) => return Ok(g),
            Err(Error::Disconnected { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::RetriesExhausted {
        attempts: ER_MAX_ATTEMPTS,
    })
}

/// How leaders weight their own measurement of the signal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LeaderMode {
    /// Leaders pinned exactly to the signal (`k -> inf`).
    NoiseFree,
    /// Noise-corrupted leaders with finite gain `k > 0`.
    Gain(f64),
}

impl LeaderMode {
    pub fn validate(self) -> Result<Self> {
        match self {
            LeaderMode::Gain(k) if !(k.is_finite() && k > 0.0) => Err(Error::InvalidGain(k)),
            m => Ok(m),
        }
    }
}

/// Ordered set of distinct leader nodes; the first member is the pivot.
#[derive(Debug, Clone, PartialEq)]
pub struct LeaderSet {
    members: Vec<usize>,
    mode: LeaderMode,
}

impl LeaderSet {
    /// Validates against a graph of order `n`.
    ///
    /// Noise-free sets need `1 <= m < n` (at least one follower). Gain sets may
    /// contain every node since `L + kI` stays nonsingular.
    pub fn new(members: Vec<usize>, mode: LeaderMode, n: usize) -> Result<Self> {
        let mode = mode.validate()?;
        let m = members.len();
        if m == 0 {
            return Err(Error::InvalidLeaderSet("leader set is empty".into()));
        }
        let max_m = match mode {
            LeaderMode::NoiseFree => n - 1,
            LeaderMode::Gain(_) => n,
        };
        if m > max_m {
            return Err(Error::InvalidLeaderSet(format!(
                "{m} leaders on {n} nodes (at most {max_m} allowed in this mode)"
            )));
        }
        check_members(&members, n)?;
        Ok(Self { members, mode })
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn pivot(&self) -> usize {
        self.members[0]
    }

    pub fn mode(&self) -> LeaderMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Complement of the leader set in `0..n`, ascending.
    pub fn followers(&self, n: usize) -> Vec<usize> {
        followers(&self.members, n)
    }
}

pub(crate) fn check_members(members: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    for &s in members {
        if s >= n {
            return Err(Error::NodeOutOfRange {
                line: None,
                node: s,
                n,
            });
        }
        if std::mem::replace(&mut seen[s], true) {
            return Err(Error::InvalidLeaderSet(format!("node {s} listed twice")));
        }
    }
    Ok(())
}

pub(crate) fn followers(members: &[usize], n: usize) -> Vec<usize> {
    let mut is_leader = vec![false; n];
    for &s in members {
        is_leader[s] = true;
    }
    (0..n).filter(|&i| !is_leader[i]).collect()
}
