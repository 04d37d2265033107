//! Brute-force oracle for the balanced transportation problem.
//!
//! Every vertex of the transportation polytope is the flow solution of some
//! spanning tree of the complete bipartite support graph, and the optimum is
//! attained at a vertex. So: enumerate all spanning trees, solve each tree's
//! (unique) flows by leaf peeling, keep the cheapest feasible one. Exponential
//! and proudly so; supports up to about 5x5 only. Deliberately shares no code
//! or algorithmic idea with the production solver it cross-checks.

use rand::Rng;

/// Exact optimum by exhaustive vertex enumeration. `cost[i][j]` is the cost
/// of moving one unit from supply `i` to demand `j`.
///
/// Panics if no spanning tree yields a feasible flow, which cannot happen for
/// balanced nonnegative marginals.
pub fn brute_force_transport(supply: &[f64], demand: &[f64], cost: &[Vec<u32>]) -> f64 {
    let m = supply.len();
    let n = demand.len();
    assert!(m >= 1 && n >= 1);
    let total_supply: f64 = supply.iter().sum();
    let total_demand: f64 = demand.iter().sum();
    assert!(
        (total_supply - total_demand).abs() <= 1e-9,
        "oracle needs balanced marginals: {total_supply} vs {total_demand}"
    );
    if total_supply == 0.0 {
        return 0.0;
    }

    let edges: Vec<(usize, usize)> =
        (0..m).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let mut chosen = Vec::with_capacity(m + n - 1);
    let mut best = f64::INFINITY;
    enumerate_trees(&edges, m, 0, &mut DisjointSet::new(m + n), &mut chosen, &mut |tree| {
        if let Some(c) = tree_cost(tree, supply, demand, cost) {
            if c < best {
                best = c;
            }
        }
    });
    assert!(best.is_finite(), "no feasible vertex found");
    best
}

/// Backtracking enumeration of spanning trees of the bipartite support graph
/// (sources `0..m`, sinks `m..m+n`): each edge is either taken, if it joins
/// two components, or skipped, pruning branches that cannot complete a tree
/// with the edges left.
fn enumerate_trees(
    edges: &[(usize, usize)],
    m: usize,
    next: usize,
    dsu: &mut DisjointSet,
    chosen: &mut Vec<(usize, usize)>,
    visit: &mut impl FnMut(&[(usize, usize)]),
) {
    let nodes = dsu.len();
    if chosen.len() == nodes - 1 {
        visit(chosen);
        return;
    }
    if edges.len() - next < nodes - 1 - chosen.len() {
        return;
    }
    let (i, j) = edges[next];
    if dsu.find(i) != dsu.find(m + j) {
        let snapshot = dsu.clone();
        dsu.union(i, m + j);
        chosen.push((i, j));
        enumerate_trees(edges, m, next + 1, dsu, chosen, visit);
        chosen.pop();
        *dsu = snapshot;
    }
    enumerate_trees(edges, m, next + 1, dsu, chosen, visit);
}

/// Unique flows of a spanning tree by leaf peeling; `None` if any flow is
/// meaningfully negative (infeasible vertex).
fn tree_cost(
    tree: &[(usize, usize)],
    supply: &[f64],
    demand: &[f64],
    cost: &[Vec<u32>],
) -> Option<f64> {
    let m = supply.len();
    let n = demand.len();
    let nodes = m + n;
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nodes]; // (other node, tree edge idx)
    for (e, &(i, j)) in tree.iter().enumerate() {
        adj[i].push((m + j, e));
        adj[m + j].push((i, e));
    }
    let mut residual: Vec<f64> = supply.iter().copied().chain(demand.iter().copied()).collect();
    let mut degree: Vec<usize> = adj.iter().map(|a| a.len()).collect();
    let mut removed_edge = vec![false; tree.len()];
    let mut stack: Vec<usize> = (0..nodes).filter(|&v| degree[v] == 1).collect();
    let mut total = 0.0;
    let mut peeled = 0;
    while let Some(v) = stack.pop() {
        if degree[v] != 1 {
            continue;
        }
        let &(other, e) = adj[v].iter().find(|&&(_, e)| !removed_edge[e])?;
        let f = residual[v];
        if f < -1e-12 {
            return None;
        }
        let (i, j) = tree[e];
        total += f.max(0.0) * cost[i][j] as f64;
        residual[other] -= f;
        residual[v] = 0.0;
        removed_edge[e] = true;
        degree[v] = 0;
        degree[other] -= 1;
        peeled += 1;
        if degree[other] == 1 {
            stack.push(other);
        }
    }
    debug_assert_eq!(peeled, nodes - 1);
    Some(total)
}

#[derive(Clone)]
struct DisjointSet {
    parent: Vec<usize>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet { parent: (0..n).collect() }
    }

    fn len(&self) -> usize {
        self.parent.len()
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

/// Random balanced instance with supports up to `max_side` per side: integer
/// costs in `0..=max_cost`, marginals normalized to total mass 1 with the
/// rounding slack folded into the last demand entry.
pub fn random_balanced_instance(
    rng: &mut impl Rng,
    max_side: usize,
    max_cost: u32,
) -> (Vec<f64>, Vec<f64>, Vec<Vec<u32>>) {
    let m = rng.random_range(1..=max_side);
    let n = rng.random_range(1..=max_side);
    let raw_s: Vec<f64> = (0..m).map(|_| rng.random_range(0.05..1.0f64)).collect();
    let raw_d: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0f64)).collect();
    let ts: f64 = raw_s.iter().sum();
    let td: f64 = raw_d.iter().sum();
    let supply: Vec<f64> = raw_s.iter().map(|v| v / ts).collect();
    let mut demand: Vec<f64> = raw_d.iter().map(|v| v / td).collect();
    let slack = supply.iter().sum::<f64>() - demand.iter().sum::<f64>();
    *demand.last_mut().unwrap() += slack;
    let cost: Vec<Vec<u32>> =
        (0..m).map(|_| (0..n).map(|_| rng.random_range(0..=max_cost)).collect()).collect();
    (supply, demand, cost)
}
