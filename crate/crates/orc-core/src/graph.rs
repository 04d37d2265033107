//! Immutable undirected simple graphs with BFS distance machinery.
//!
//! Nodes are dense ids `0..n`; each adjacency list is sorted and
//! duplicate-free, and edges are stored symmetrically.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write as _;

use crate::error::{Error, Result};

/// Sentinel for "no distance recorded under the BFS cap".
pub const UNREACHED: u32 = u32::MAX;

/// Undirected unweighted simple graph over nodes `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate edges collapse; self-loops
    /// and out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adjacency = alloc::vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::EdgeOutOfRange { edge: (u, v), nodes: n });
            }
            if u == v {
                return Err(Error::SelfLoop { node: u });
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph { adjacency })
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` pairs with `u < v`, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    fn check_node(&self, v: usize) -> Result<()> {
        if v >= self.node_count() {
            return Err(Error::NodeOutOfRange { node: v, nodes: self.node_count() });
        }
        Ok(())
    }
}

/// Hop distances from one source, truncated at an optional depth cap.
///
/// Nodes beyond the cap (or unreachable) are absent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMap {
    pub source: usize,
    pub depth_cap: Option<usize>,
    pub distances: BTreeMap<usize, usize>,
}

impl DistanceMap {
    pub fn get(&self, v: usize) -> Option<usize> {
        self.distances.get(&v).copied()
    }
}

/// BFS hop distances from `source`, up to `depth_cap` (`None` = unbounded).
pub fn bfs_distances(g: &Graph, source: usize, depth_cap: Option<usize>) -> Result<DistanceMap> {
    g.check_node(source)?;
    let mut distances = BTreeMap::new();
    let mut seen = alloc::vec![false; g.node_count()];
    let mut queue = VecDeque::new();
    seen[source] = true;
    distances.insert(source, 0);
    queue.push_back((source, 0usize));
    while let Some((u, du)) = queue.pop_front() {
        if let Some(cap) = depth_cap {
            if du == cap {
                continue;
            }
        }
        for &v in g.neighbors(u) {
            if !seen[v] {
                seen[v] = true;
                distances.insert(v, du + 1);
                queue.push_back((v, du + 1));
            }
        }
    }
    Ok(DistanceMap { source, depth_cap, distances })
}

/// Hop distance between two nodes, or `None` if disconnected.
pub fn distance(g: &Graph, u: usize, v: usize) -> Result<Option<usize>> {
    g.check_node(u)?;
    g.check_node(v)?;
    if u == v {
        return Ok(Some(0));
    }
    // Early-exit BFS; stops as soon as v is dequeued.
    let mut seen = alloc::vec![false; g.node_count()];
    let mut queue = VecDeque::new();
    seen[u] = true;
    queue.push_back((u, 0usize));
    while let Some((w, dw)) = queue.pop_front() {
        for &z in g.neighbors(w) {
            if !seen[z] {
                if z == v {
                    return Ok(Some(dw + 1));
                }
                seen[z] = true;
                queue.push_back((z, dw + 1));
            }
        }
    }
    Ok(None)
}

/// The set `{v' : d(v', v) <= k}`, ascending. Always contains `v`.
pub fn k_hop_neighborhood(g: &Graph, v: usize, k: usize) -> Result<Vec<usize>> {
    let map = bfs_distances(g, v, Some(k))?;
    Ok(map.distances.keys().copied().collect())
}

/// Dense matrix of hop distances between two node sets.
///
/// Entries beyond the cap hold [`UNREACHED`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistMatrix {
    pub src: Vec<usize>,
    pub dst: Vec<usize>,
    data: Vec<u32>,
}

impl DistMatrix {
    pub fn rows(&self) -> usize {
        self.src.len()
    }

    pub fn cols(&self) -> usize {
        self.dst.len()
    }

    /// Raw entry; [`UNREACHED`] marks "beyond cap".
    pub fn raw(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.dst.len() + j]
    }

    pub fn get(&self, i: usize, j: usize) -> Option<u32> {
        let d = self.raw(i, j);
        (d != UNREACHED).then_some(d)
    }
}

/// Exact hop distances between `src_set` and `dst_set`, by one truncated BFS
/// per source node. Callers pick `cap` large enough that every pair they care
/// about is covered (for measure supports, `d(x, y) + hop_x + hop_y`).
pub fn pairwise_distances(
    g: &Graph,
    src_set: &[usize],
    dst_set: &[usize],
    cap: usize,
) -> Result<DistMatrix> {
    if src_set.is_empty() || dst_set.is_empty() {
        return Err(Error::InvalidParameter("pairwise_distances: empty node set".into()));
    }
    for &v in src_set.iter().chain(dst_set) {
        g.check_node(v)?;
    }
    let cols = dst_set.len();
    // Column index of each dst node, so the BFS scatters straight into the row.
    let mut col_of = alloc::vec![usize::MAX; g.node_count()];
    for (j, &v) in dst_set.iter().enumerate() {
        col_of[v] = j;
    }
    let mut data = alloc::vec![UNREACHED; src_set.len() * cols];
    let mut dist = alloc::vec![UNREACHED; g.node_count()];
    let mut touched: Vec<usize> = Vec::new();
    let mut queue = VecDeque::new();
    for (i, &s) in src_set.iter().enumerate() {
        let row = &mut data[i * cols..(i + 1) * cols];
        dist[s] = 0;
        touched.push(s);
        queue.push_back(s);
        let mut remaining = dst_set.len();
        if col_of[s] != usize::MAX {
            row[col_of[s]] = 0;
            remaining -= 1;
        }
        while let Some(u) = queue.pop_front() {
            if remaining == 0 {
                break;
            }
            let du = dist[u];
            if du as usize == cap {
                continue;
            }
            for &v in g.neighbors(u) {
                if dist[v] == UNREACHED {
                    dist[v] = du + 1;
                    touched.push(v);
                    queue.push_back(v);
                    if col_of[v] != usize::MAX {
                        row[col_of[v]] = du + 1;
                        remaining -= 1;
                    }
                }
            }
        }
        for &v in &touched {
            dist[v] = UNREACHED;
        }
        touched.clear();
        queue.clear();
    }
    Ok(DistMatrix { src: src_set.to_vec(), dst: dst_set.to_vec(), data })
}

/// Parses the edge-list text format: first line `n m`, then `m` lines `u v`.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text.lines().enumerate();
    let (n, m) = loop {
        match lines.next() {
            Some((idx, line)) => {
                if line.trim().is_empty() {
                    continue;
                }
                let mut parts = line.split_whitespace();
                let n = parse_field(&mut parts, idx, "node count")?;
                let m = parse_field(&mut parts, idx, "edge count")?;
                if parts.next().is_some() {
                    return Err(Error::EdgeListParse {
                        line: idx + 1,
                        reason: "expected exactly two fields in header".into(),
                    });
                }
                break (n, m);
            }
            None => {
                return Err(Error::EdgeListParse { line: 1, reason: "missing header line".into() })
            }
        }
    };
    let mut edges = Vec::with_capacity(m);
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let u = parse_field(&mut parts, idx, "edge endpoint")?;
        let v = parse_field(&mut parts, idx, "edge endpoint")?;
        if parts.next().is_some() {
            return Err(Error::EdgeListParse {
                line: idx + 1,
                reason: "expected exactly two fields per edge".into(),
            });
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(Error::EdgeListParse {
            line: 1,
            reason: alloc::format!("header declares {m} edges, found {}", edges.len()),
        });
    }
    Graph::from_edges(n, &edges)
}

fn parse_field<'a>(
    parts: &mut impl Iterator<Item = &'a str>,
    idx: usize,
    what: &str,
) -> Result<usize> {
    let tok = parts.next().ok_or_else(|| Error::EdgeListParse {
        line: idx + 1,
        reason: alloc::format!("missing {what}"),
    })?;
    tok.parse().map_err(|_| Error::EdgeListParse {
        line: idx + 1,
        reason: alloc::format!("invalid {what} {tok:?}"),
    })
}

/// Canonical edge-list text for a graph (`u < v`, ascending, LF endings).
pub fn to_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", g.node_count(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// Checks adjacency symmetry, sortedness, and simplicity. Used by generator
/// tests; cheap enough to run on every generated graph.
pub fn validate(g: &Graph) -> Result<()> {
    for u in 0..g.node_count() {
        let list = g.neighbors(u);
        for w in list.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidParameter(
                    alloc::format!("adjacency of {u} not sorted/deduped").to_string(),
                ));
            }
        }
        for &v in list {
            if v == u {
                return Err(Error::SelfLoop { node: u });
            }
            if !g.has_edge(v, u) {
                return Err(Error::InvalidParameter(alloc::format!(
                    "asymmetric edge ({u}, {v})"
                )));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        let mut edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        edges.push((n - 1, 0));
        Graph::from_edges(n, &edges).unwrap()
    }

    fn grid3() -> Graph {
        crate::generate::gen_grid(3, 3).unwrap()
    }

    #[test]
    fn build_p2() {
        let g = path(2);
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.degree(0), 1);
        assert_eq!(g.degree(1), 1);
    }

    #[test]
    fn build_triangle() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!((0..3).all(|v| g.degree(v) == 2));
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn build_c4() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert!((0..4).all(|v| g.degree(v) == 2));
    }

    #[test]
    fn build_collapses_duplicates() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 0), (0, 1)]).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn build_rejects_out_of_range() {
        let err = Graph::from_edges(2, &[(0, 5)]).unwrap_err();
        assert_eq!(err, Error::EdgeOutOfRange { edge: (0, 5), nodes: 2 });
    }

    #[test]
    fn build_rejects_self_loop() {
        let err = Graph::from_edges(2, &[(1, 1)]).unwrap_err();
        assert_eq!(err, Error::SelfLoop { node: 1 });
    }

    #[test]
    fn bfs_c4_cap2() {
        let g = cycle(4);
        let d = bfs_distances(&g, 0, Some(2)).unwrap();
        let want: BTreeMap<usize, usize> = [(0, 0), (1, 1), (3, 1), (2, 2)].into_iter().collect();
        assert_eq!(d.distances, want);
    }

    #[test]
    fn bfs_cap_zero() {
        let g = path(2);
        let d = bfs_distances(&g, 0, Some(0)).unwrap();
        assert_eq!(d.distances.len(), 1);
        assert_eq!(d.get(0), Some(0));
    }

    #[test]
    fn bfs_grid_corner_to_corner() {
        let g = grid3();
        let d = bfs_distances(&g, 0, None).unwrap();
        assert_eq!(d.get(8), Some(4));
    }

    #[test]
    fn bfs_parent_at_distance_minus_one() {
        let g = grid3();
        let d = bfs_distances(&g, 4, None).unwrap();
        for (&v, &dv) in &d.distances {
            if dv > 0 {
                assert!(g.neighbors(v).iter().any(|&w| d.get(w) == Some(dv - 1)));
            }
        }
    }

    #[test]
    fn k_hop_path_center() {
        let g = path(3);
        assert_eq!(k_hop_neighborhood(&g, 1, 1).unwrap(), vec![0, 1, 2]);
        assert_eq!(k_hop_neighborhood(&g, 0, 2).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn k_hop_grid_center() {
        let g = crate::generate::gen_grid(5, 5).unwrap();
        let ball = k_hop_neighborhood(&g, 12, 1).unwrap();
        assert_eq!(ball.len(), 5);
        assert!(ball.contains(&12));
    }

    #[test]
    fn k_hop_nested() {
        let g = grid3();
        for v in 0..9 {
            for k in 0..3 {
                let inner = k_hop_neighborhood(&g, v, k).unwrap();
                let outer = k_hop_neighborhood(&g, v, k + 1).unwrap();
                assert!(inner.iter().all(|x| outer.contains(x)));
            }
        }
    }

    #[test]
    fn pairwise_singleton() {
        let g = path(2);
        let m = pairwise_distances(&g, &[0], &[0], 3).unwrap();
        assert_eq!(m.get(0, 0), Some(0));
    }

    #[test]
    fn pairwise_c4() {
        let g = cycle(4);
        let m = pairwise_distances(&g, &[0, 1], &[2, 3], 2).unwrap();
        assert_eq!(m.get(0, 0), Some(2));
        assert_eq!(m.get(0, 1), Some(1));
        assert_eq!(m.get(1, 0), Some(1));
        assert_eq!(m.get(1, 1), Some(2));
    }

    #[test]
    fn pairwise_beyond_cap() {
        let g = path(2);
        let m = pairwise_distances(&g, &[0], &[1], 0).unwrap();
        assert_eq!(m.get(0, 0), None);
        assert_eq!(m.raw(0, 0), UNREACHED);
    }

    #[test]
    fn edge_list_round_trip() {
        let g = cycle(5);
        let text = to_edge_list(&g);
        let h = parse_edge_list(&text).unwrap();
        assert_eq!(g, h);
    }

    #[test]
    fn edge_list_rejects_bad_header() {
        assert!(matches!(parse_edge_list(""), Err(Error::EdgeListParse { .. })));
        assert!(matches!(parse_edge_list("3\n"), Err(Error::EdgeListParse { .. })));
        assert!(matches!(parse_edge_list("2 1\n0 x\n"), Err(Error::EdgeListParse { .. })));
        assert!(matches!(parse_edge_list("2 2\n0 1\n"), Err(Error::EdgeListParse { .. })));
    }
}
