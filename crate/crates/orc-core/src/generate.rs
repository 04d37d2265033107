//! The four graph families used by the experiment harness.
//!
//! All generators are deterministic in `(params, seed)`: the RNG stream is a
//! seeded ChaCha12 and nodes are visited in fixed order.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

fn rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

/// Erdos-Renyi G(n, p): each of the n(n-1)/2 pairs kept with probability `p`.
pub fn gen_er(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("gen_er: n = {n} < 2")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("gen_er: p = {p} outside [0, 1]")));
    }
    let mut r = rng(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if r.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges)
}

/// Barabasi-Albert preferential attachment.
///
/// Seeding convention: nodes `0..=m` form a star centered at node 0; each
/// later node attaches to `m` distinct existing nodes drawn with probability
/// proportional to degree (repeated sampling without replacement). Total edge
/// count is therefore exactly `m * (n - m)`.
pub fn gen_ba(n: usize, m: usize, seed: u64) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("gen_ba: n = {n} < 2")));
    }
    if m < 1 || m >= n {
        return Err(Error::InvalidParameter(format!("gen_ba: m = {m} outside [1, n)")));
    }
    let mut r = rng(seed);
    let mut edges = Vec::with_capacity(m * (n - m));
    // One entry per edge endpoint; sampling an index is degree-proportional.
    let mut endpoints = Vec::with_capacity(2 * m * (n - m));
    for leaf in 1..=m {
        edges.push((0, leaf));
        endpoints.push(0);
        endpoints.push(leaf);
    }
    let mut targets = BTreeSet::new();
    for new in (m + 1)..n {
        targets.clear();
        while targets.len() < m {
            let pick = endpoints[r.random_range(0..endpoints.len())];
            targets.insert(pick);
        }
        for &t in &targets {
            edges.push((t, new));
            endpoints.push(t);
            endpoints.push(new);
        }
    }
    Graph::from_edges(n, &edges)
}

/// Watts-Strogatz small world: ring lattice where each node links to its
/// `ring_k / 2` clockwise neighbors, then every clockwise edge is rewired
/// with probability `beta` to a uniform non-duplicate, non-self target.
pub fn gen_ws(n: usize, ring_k: usize, beta: f64, seed: u64) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("gen_ws: n = {n} < 2")));
    }
    if ring_k % 2 != 0 || ring_k == 0 || ring_k >= n {
        return Err(Error::InvalidParameter(format!(
            "gen_ws: ring_k = {ring_k} must be even, positive, and < n"
        )));
    }
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::InvalidParameter(format!("gen_ws: beta = {beta} outside [0, 1]")));
    }
    let mut r = rng(seed);
    let mut adj: Vec<BTreeSet<usize>> = alloc::vec![BTreeSet::new(); n];
    for j in 1..=(ring_k / 2) {
        for u in 0..n {
            let v = (u + j) % n;
            adj[u].insert(v);
            adj[v].insert(u);
        }
    }
    for j in 1..=(ring_k / 2) {
        for u in 0..n {
            let v = (u + j) % n;
            if r.random::<f64>() < beta {
                if adj[u].len() == n - 1 {
                    continue; // u already adjacent to everyone; nothing to rewire to
                }
                let w = loop {
                    let cand = r.random_range(0..n);
                    if cand != u && !adj[u].contains(&cand) {
                        break cand;
                    }
                };
                adj[u].remove(&v);
                adj[v].remove(&u);
                adj[u].insert(w);
                adj[w].insert(u);
            }
        }
    }
    let mut edges = Vec::new();
    for (u, set) in adj.iter().enumerate() {
        for &v in set {
            if u < v {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges)
}

/// Two-dimensional grid lattice; node id is `row * cols + col`.
pub fn gen_grid(rows: usize, cols: usize) -> Result<Graph> {
    if rows < 2 || cols < 2 {
        return Err(Error::InvalidParameter(format!(
            "gen_grid: rows = {rows}, cols = {cols} must both be >= 2"
        )));
    }
    let id = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::with_capacity(2 * rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    Graph::from_edges(rows * cols, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::validate;

    #[test]
    fn grid_2x2_is_c4() {
        let g = gen_grid(2, 2).unwrap();
        assert_eq!(g.node_count(), 4);
        assert_eq!(g.edge_count(), 4);
        assert!((0..4).all(|v| g.degree(v) == 2));
    }

    #[test]
    fn er_p1_is_complete() {
        let g = gen_er(10, 1.0, 42).unwrap();
        assert_eq!(g.edge_count(), 45);
    }

    #[test]
    fn er_p0_is_empty() {
        let g = gen_er(10, 0.0, 42).unwrap();
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn ba_edge_count_matches_convention() {
        // Star core contributes m edges, each of the n-m-1 later nodes m more.
        let g = gen_ba(20, 3, 7).unwrap();
        assert_eq!(g.edge_count(), 3 * (20 - 3));
        // Connected by construction.
        let d = crate::graph::bfs_distances(&g, 0, None).unwrap();
        assert_eq!(d.distances.len(), 20);
    }

    #[test]
    fn generators_deterministic_and_valid() {
        for seed in [0u64, 1, 99] {
            let a = gen_er(30, 0.2, seed).unwrap();
            assert_eq!(a, gen_er(30, 0.2, seed).unwrap());
            validate(&a).unwrap();

            let b = gen_ba(30, 2, seed).unwrap();
            assert_eq!(b, gen_ba(30, 2, seed).unwrap());
            validate(&b).unwrap();

            let c = gen_ws(30, 4, 0.3, seed).unwrap();
            assert_eq!(c, gen_ws(30, 4, 0.3, seed).unwrap());
            validate(&c).unwrap();
            // Rewiring preserves the edge budget.
            assert_eq!(c.edge_count(), 30 * 2);
        }
        validate(&gen_grid(4, 5).unwrap()).unwrap();
    }

    #[test]
    fn distinct_seeds_differ() {
        assert_ne!(gen_er(30, 0.2, 1).unwrap(), gen_er(30, 0.2, 2).unwrap());
    }

    #[test]
    fn parameter_validation() {
        assert!(gen_er(1, 0.5, 0).is_err());
        assert!(gen_er(5, 1.5, 0).is_err());
        assert!(gen_ba(5, 0, 0).is_err());
        assert!(gen_ba(5, 5, 0).is_err());
        assert!(gen_ws(5, 3, 0.1, 0).is_err());
        assert!(gen_ws(5, 6, 0.1, 0).is_err());
        assert!(gen_ws(5, 4, -0.1, 0).is_err());
        assert!(gen_grid(1, 5).is_err());
    }
}
