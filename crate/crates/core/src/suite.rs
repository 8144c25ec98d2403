//! Graph suites for identity checks.
//!
//! [`connected_graphs`] lists every connected simple graph on `n` nodes up to
//! isomorphism: all `2^(n(n-1)/2)` edge masks are scanned, disconnected ones
//! dropped, and each survivor is reduced to the smallest mask over all `n!`
//! relabelings. This yields 6, 21 and 112 classes for n = 4, 5, 6.

use std::collections::BTreeSet;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{erdos_renyi_with, Graph};

/// Largest order accepted by [`connected_graphs`].
pub const MAX_ENUMERATED_N: usize = 7;

#[derive(Debug, Clone)]
pub struct SuiteGraph {
    pub label: String,
    pub graph: Graph,
}

fn pair_index(n: usize) -> Vec<Vec<usize>> {
    let mut idx = vec![vec![usize::MAX; n]; n];
    for (e, (i, j)) in (0..n).tuple_combinations().enumerate() {
        idx[i][j] = e;
        idx[j][i] = e;
    }
    idx
}

fn mask_connected(n: usize, pairs: &[(usize, usize)], mask: u32) -> bool {
    let mut reach = 1u32;
    loop {
        let mut grown = reach;
        for (e, &(i, j)) in pairs.iter().enumerate() {
            if mask >> e & 1 == 1 && (grown >> i & 1 == 1 || grown >> j & 1 == 1) {
                grown |= 1 << i | 1 << j;
            }
        }
        if grown == reach {
            return reach.count_ones() as usize == n;
        }
        reach = grown;
    }
}

/// One representative per isomorphism class of connected graphs on `n` nodes,
/// ordered by canonical mask.
pub fn connected_graphs(n: usize) -> Result<Vec<Graph>> {
    if !(2..=MAX_ENUMERATED_N).contains(&n) {
        return Err(Error::InvalidParameter(format!(
            "exhaustive enumeration supports 2 <= n <= {MAX_ENUMERATED_N}, got {n}"
        )));
    }
    let idx = pair_index(n);
    let pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
    let perm_maps: Vec<Vec<usize>> = (0..n)
        .permutations(n)
        .map(|p| pairs.iter().map(|&(i, j)| idx[p[i]][p[j]]).collect())
        .collect();
    let mut classes = BTreeSet::new();
    for mask in 0u32..(1 << pairs.len()) {
        if (mask.count_ones() as usize) < n - 1 || !mask_connected(n, &pairs, mask) {
            continue;
        }
        let canonical = perm_maps
            .iter()
            .map(|map| {
                (0..pairs.len())
                    .filter(|&e| mask >> e & 1 == 1)
                    .fold(0u32, |acc, e| acc | 1 << map[e])
            })
            .min()
            .expect("at least one permutation");
        classes.insert(canonical);
    }
    classes
        .into_iter()
        .map(|mask| {
            Graph::unweighted(
                n,
                pairs
                    .iter()
                    .enumerate()
                    .filter(|&(e, _)| mask >> e & 1 == 1)
                    .map(|(_, &p)| p),
            )
        })
        .collect()
}

/// All connected graphs for each order in `orders`, labelled `iso{n}-{i}`.
pub fn enumerated_suite(orders: impl IntoIterator<Item = usize>) -> Result<Vec<SuiteGraph>> {
    let mut out = Vec::new();
    for n in orders {
        for (i, graph) in connected_graphs(n)?.into_iter().enumerate() {
            out.push(SuiteGraph {
                label: format!("iso{n}-{i}"),
                graph,
            });
        }
    }
    Ok(out)
}

/// `count` connected G(n, p) graphs with `n` uniform in `min_n..=max_n` and
/// `p` uniform in `[0.25, 0.75)`. Every odd-indexed graph gets weights
/// uniform in `[0.5, 2)`. Reproducible per seed.
pub fn random_suite(
    count: usize,
    min_n: usize,
    max_n: usize,
    seed: u64,
) -> Result<Vec<SuiteGraph>> {
    if min_n < 2 || min_n > max_n {
        return Err(Error::InvalidParameter(format!(
            "bad order range {min_n}..={max_n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let n = rng.random_range(min_n..=max_n);
            let p = rng.random_range(0.25..0.75);
            let mut g = erdos_renyi_with(n, p, &mut rng)?;
            if i % 2 == 1 {
                let edges: Vec<(usize, usize, f64)> = g
                    .edges()
                    .iter()
                    .map(|e| (e.u, e.v, rng.random_range(0.5..2.0)))
                    .collect();
                g = Graph::new(n, edges)?;
            }
            Ok(SuiteGraph {
                label: format!("random{seed}-{i}-n{n}"),
                graph: g,
            })
        })
        .collect()
}
