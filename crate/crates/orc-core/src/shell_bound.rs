//! Residual-shell lower bound on Ollivier-Ricci curvature.
//!
//! Support pairs of the two local measures are grouped into shells by hop
//! distance. Mass is matched shell by shell from distance 0 outward, each
//! matched unit costing its shell index; the mass left after shell `l` is
//! charged at the worst distance between positive residual supports. The
//! resulting transport cost upper bound `U_l` never undercuts the exact `W1`,
//! because the partial plan plus any coupling of the residuals is a feasible
//! coupling, so `1 - U_l / d(x, y)` is a true curvature lower bound.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{distance, pairwise_distances, DistMatrix, Graph, UNREACHED};
use crate::measure::{k_hop_measure, LocalMeasure};
use crate::transport::{CurvatureResult, Method};

/// How mass is allocated within one shell.
///
/// `Greedy` follows ascending lexicographic node order, taking the minimum of
/// the current residuals at each pair. `MaxFlow` maximizes the matched mass
/// per shell; any per-shell allocation respecting the residuals keeps the
/// bound valid, so this is a drop-in tightening.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Greedy,
    MaxFlow,
}

/// Support pairs bucketed by exact hop distance.
///
/// Every `(i, j)` index pair lands in exactly one shell (distance `<= l`) or
/// in `overflow` (farther, with its exact distance, [`UNREACHED`] if beyond
/// the BFS cap). Within a bucket, pairs ascend in `(i, j)`; when the node
/// sets are sorted this is ascending lexicographic node order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShellPartition {
    pub max_shell: usize,
    pub shells: Vec<Vec<(usize, usize)>>,
    pub overflow: Vec<(usize, usize, u32)>,
    /// The distance matrix the partition came from; kept for residual lookups.
    pub dist: DistMatrix,
}

/// Buckets all pairs of `dist` into shells `0..=l` plus overflow.
pub fn build_shells(dist: DistMatrix, l: usize) -> ShellPartition {
    let mut shells = alloc::vec![Vec::new(); l + 1];
    let mut overflow = Vec::new();
    for i in 0..dist.rows() {
        for j in 0..dist.cols() {
            let d = dist.raw(i, j);
            if d != UNREACHED && (d as usize) <= l {
                shells[d as usize].push((i, j));
            } else {
                overflow.push((i, j, d));
            }
        }
    }
    ShellPartition { max_shell: l, shells, overflow, dist }
}

/// Outcome of the shell-wise partial transport.
#[derive(Debug, Clone, PartialEq)]
pub struct ShellBound {
    /// Mass matched on each shell, `m_0..m_l`.
    pub shell_masses: Vec<f64>,
    /// Mass left unmatched after the last shell.
    pub residual: f64,
    /// Worst distance between supports that still hold residual mass
    /// (0 when nothing is left).
    pub r_bar: usize,
    /// `sum_r r * m_r + r_bar * residual`; upper bound on the W1 cost.
    pub upper_bound: f64,
    /// The partial plan, as `(row index, col index, mass)` over the
    /// partition's node sets.
    pub partial_plan: Vec<(usize, usize, f64)>,
    /// Positive residual mass per side, as `(node id, mass)`.
    pub residual_x: Vec<(usize, f64)>,
    pub residual_y: Vec<(usize, f64)>,
}

/// Runs the shell-wise partial transport of `mu_x` onto `mu_y`.
///
/// Residuals start as the measure masses and shrink as shells are processed
/// in order of increasing distance; mass conservation
/// (`sum(shell_masses) + residual == 1`) holds to float accuracy.
pub fn shell_transport(
    mu_x: &LocalMeasure,
    mu_y: &LocalMeasure,
    shells: &ShellPartition,
    strategy: Strategy,
) -> Result<ShellBound> {
    if shells.dist.src != mu_x.support() || shells.dist.dst != mu_y.support() {
        return Err(Error::InvalidParameter(
            "shell partition was not built over the measures' supports".into(),
        ));
    }
    let mut a = mu_x.masses();
    let mut b = mu_y.masses();
    let mut shell_masses = alloc::vec![0.0; shells.max_shell + 1];
    let mut partial_plan = Vec::new();

    for (r, shell) in shells.shells.iter().enumerate() {
        match strategy {
            Strategy::Greedy => {
                for &(i, j) in shell {
                    let f = a[i].min(b[j]);
                    if f > 0.0 {
                        a[i] -= f;
                        b[j] -= f;
                        shell_masses[r] += f;
                        partial_plan.push((i, j, f));
                    }
                }
            }
            Strategy::MaxFlow => {
                let flows = max_flow_allocation(&a, &b, shell);
                for (&(i, j), &f) in shell.iter().zip(&flows) {
                    if f > 0.0 {
                        a[i] = (a[i] - f).max(0.0);
                        b[j] = (b[j] - f).max(0.0);
                        shell_masses[r] += f;
                        partial_plan.push((i, j, f));
                    }
                }
            }
        }
    }

    let residual: f64 = a.iter().sum();
    let rows_pos: Vec<usize> = (0..a.len()).filter(|&i| a[i] > 0.0).collect();
    let cols_pos: Vec<usize> = (0..b.len()).filter(|&j| b[j] > 0.0).collect();
    let mut r_bar = 0usize;
    if residual > 0.0 {
        for &i in &rows_pos {
            for &j in &cols_pos {
                let d = shells.dist.raw(i, j);
                if d == UNREACHED {
                    return Err(Error::ResidualDistanceUnknown {
                        pair: (shells.dist.src[i], shells.dist.dst[j]),
                    });
                }
                r_bar = r_bar.max(d as usize);
            }
        }
    }

    let weighted: f64 =
        shell_masses.iter().enumerate().map(|(r, &m)| r as f64 * m).sum();
    let upper_bound = weighted + r_bar as f64 * residual;

    let residual_x = rows_pos.iter().map(|&i| (shells.dist.src[i], a[i])).collect();
    let residual_y = cols_pos.iter().map(|&j| (shells.dist.dst[j], b[j])).collect();
    Ok(ShellBound {
        shell_masses,
        residual,
        r_bar,
        upper_bound,
        partial_plan,
        residual_x,
        residual_y,
    })
}

/// Residual-shell curvature lower bound for the pair `(x, y)`.
///
/// All BFS in here is capped at `d(x, y) + 2k`, which dominates every
/// support-pair distance, so residual distances are always known.
pub fn rs_lower_bound(
    g: &Graph,
    x: usize,
    y: usize,
    k: usize,
    alpha: f64,
    l: usize,
    strategy: Strategy,
) -> Result<(CurvatureResult, ShellBound)> {
    if x == y {
        return Err(Error::IdenticalNodes { node: x });
    }
    let d_xy = distance(g, x, y)?.ok_or(Error::DisconnectedSupports)?;
    let mu_x = k_hop_measure(g, x, k, alpha)?;
    let mu_y = k_hop_measure(g, y, k, alpha)?;
    let dist = pairwise_distances(g, &mu_x.support(), &mu_y.support(), d_xy + 2 * k)?;
    let shells = build_shells(dist, l);
    let bound = shell_transport(&mu_x, &mu_y, &shells, strategy)?;
    let result = CurvatureResult {
        x,
        y,
        d_xy,
        w1: bound.upper_bound,
        kappa: 1.0 - bound.upper_bound / d_xy as f64,
        method: Method::RsLb,
        timing: None,
    };
    Ok((result, bound))
}

/// Maximum total mass matchable on one shell against the current residuals,
/// by Dinic's algorithm on source -> rows -> pairs -> cols -> sink. Returns
/// the flow carried by each pair, in the shell's order.
fn max_flow_allocation(a: &[f64], b: &[f64], pairs: &[(usize, usize)]) -> Vec<f64> {
    // Node layout: 0 = source, 1..=nr rows, nr+1..=nr+nc cols, last = sink.
    // Only rows/cols touched by the shell get arcs, but ids are dense anyway.
    let nr = a.len();
    let nc = b.len();
    let source = 0;
    let sink = nr + nc + 1;
    let mut net = Dinic::new(nr + nc + 2);
    let mut row_arc = alloc::vec![usize::MAX; nr];
    let mut col_arc = alloc::vec![usize::MAX; nc];
    let mut pair_arcs = Vec::with_capacity(pairs.len());
    for &(i, j) in pairs {
        if row_arc[i] == usize::MAX && a[i] > 0.0 {
            row_arc[i] = net.add_edge(source, 1 + i, a[i]);
        }
        if col_arc[j] == usize::MAX && b[j] > 0.0 {
            col_arc[j] = net.add_edge(1 + nr + j, sink, b[j]);
        }
        if a[i] > 0.0 && b[j] > 0.0 {
            // Any finite capacity above the total mass is effectively infinite.
            pair_arcs.push(Some(net.add_edge(1 + i, 1 + nr + j, 2.0)));
        } else {
            pair_arcs.push(None);
        }
    }
    net.run(source, sink);
    pair_arcs.iter().map(|arc| arc.map_or(0.0, |e| net.flow(e))).collect()
}

struct DinicEdge {
    to: usize,
    cap: f64,
    flow: f64,
}

struct Dinic {
    edges: Vec<DinicEdge>,
    adj: Vec<Vec<usize>>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl Dinic {
    fn new(nodes: usize) -> Self {
        Dinic {
            edges: Vec::new(),
            adj: alloc::vec![Vec::new(); nodes],
            level: alloc::vec![-1; nodes],
            iter: alloc::vec![0; nodes],
        }
    }

    fn add_edge(&mut self, from: usize, to: usize, cap: f64) -> usize {
        let id = self.edges.len();
        self.edges.push(DinicEdge { to, cap, flow: 0.0 });
        self.edges.push(DinicEdge { to: from, cap: 0.0, flow: 0.0 });
        self.adj[from].push(id);
        self.adj[to].push(id + 1);
        id
    }

    fn flow(&self, edge: usize) -> f64 {
        self.edges[edge].flow
    }

    fn residual(&self, edge: usize) -> f64 {
        self.edges[edge].cap - self.edges[edge].flow
    }

    fn bfs(&mut self, source: usize, sink: usize) -> bool {
        self.level.fill(-1);
        let mut queue = alloc::collections::VecDeque::new();
        self.level[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let v = self.edges[e].to;
                if self.level[v] < 0 && self.residual(e) > 0.0 {
                    self.level[v] = self.level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        self.level[sink] >= 0
    }

    fn dfs(&mut self, u: usize, sink: usize, limit: f64) -> f64 {
        if u == sink {
            return limit;
        }
        while self.iter[u] < self.adj[u].len() {
            let e = self.adj[u][self.iter[u]];
            let v = self.edges[e].to;
            if self.level[v] == self.level[u] + 1 && self.residual(e) > 0.0 {
                let pushed = self.dfs(v, sink, limit.min(self.residual(e)));
                if pushed > 0.0 {
                    self.edges[e].flow += pushed;
                    self.edges[e ^ 1].flow -= pushed;
                    return pushed;
                }
            }
            self.iter[u] += 1;
        }
        0.0
    }

    fn run(&mut self, source: usize, sink: usize) {
        while self.bfs(source, sink) {
            self.iter.fill(0);
            loop {
                let pushed = self.dfs(source, sink, f64::INFINITY);
                if pushed <= 0.0 {
                    break;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::gen_grid;
    use crate::graph::Graph;
    use crate::transport::{exact_orc, verify_plan, CostMatrix, TransportPlan};

    fn p2() -> Graph {
        Graph::from_edges(2, &[(0, 1)]).unwrap()
    }

    fn c4() -> Graph {
        Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    fn measures(g: &Graph, x: usize, y: usize, k: usize) -> (LocalMeasure, LocalMeasure) {
        (k_hop_measure(g, x, k, 0.4).unwrap(), k_hop_measure(g, y, k, 0.4).unwrap())
    }

    fn shells_for(
        g: &Graph,
        mu_x: &LocalMeasure,
        mu_y: &LocalMeasure,
        l: usize,
        cap: usize,
    ) -> ShellPartition {
        let dist = pairwise_distances(g, &mu_x.support(), &mu_y.support(), cap).unwrap();
        build_shells(dist, l)
    }

    #[test]
    fn shells_singleton() {
        let g = p2();
        let dist = pairwise_distances(&g, &[0], &[0], 2).unwrap();
        let part = build_shells(dist, 0);
        assert_eq!(part.shells[0], vec![(0, 0)]);
        assert!(part.overflow.is_empty());
    }

    #[test]
    fn shells_c4_split_and_overflow() {
        let g = c4();
        let dist = pairwise_distances(&g, &[0, 1], &[2, 3], 2).unwrap();
        let part = build_shells(dist, 1);
        assert!(part.shells[0].is_empty());
        assert_eq!(part.shells[1], vec![(0, 1), (1, 0)]); // nodes (0,3) and (1,2)
        assert_eq!(part.overflow, vec![(0, 0, 2), (1, 1, 2)]); // nodes (0,2), (1,3)
    }

    #[test]
    fn shells_large_l_has_no_overflow() {
        let g = c4();
        let dist = pairwise_distances(&g, &[0, 1], &[2, 3], 2).unwrap();
        let part = build_shells(dist, 5);
        assert!(part.overflow.is_empty());
        assert_eq!(part.shells.iter().map(Vec::len).sum::<usize>(), 4);
    }

    #[test]
    fn p2_hand_trace() {
        let g = p2();
        let (mx, my) = measures(&g, 0, 1, 1);
        let shells = shells_for(&g, &mx, &my, 1, 3);
        let bound = shell_transport(&mx, &my, &shells, Strategy::Greedy).unwrap();
        assert!((bound.shell_masses[0] - 0.8).abs() < 1e-15);
        assert!((bound.shell_masses[1] - 0.2).abs() < 1e-15);
        assert_eq!(bound.residual, 0.0);
        assert_eq!(bound.r_bar, 0);
        assert!((bound.upper_bound - 0.2).abs() < 1e-15);
    }

    #[test]
    fn identical_measures_match_on_shell_zero() {
        let g = c4();
        let mu = k_hop_measure(&g, 0, 1, 0.4).unwrap();
        for l in [0usize, 2, 4] {
            let shells = shells_for(&g, &mu, &mu, l, 2);
            let bound = shell_transport(&mu, &mu, &shells, Strategy::Greedy).unwrap();
            assert!((bound.shell_masses[0] - 1.0).abs() < 1e-12);
            assert_eq!(bound.residual, 0.0);
            assert_eq!(bound.upper_bound, 0.0);
        }
    }

    #[test]
    fn c4_hand_trace() {
        let g = c4();
        let (mx, my) = measures(&g, 0, 1, 1);
        let shells = shells_for(&g, &mx, &my, 1, 3);
        let bound = shell_transport(&mx, &my, &shells, Strategy::Greedy).unwrap();
        assert!((bound.shell_masses[0] - 0.6).abs() < 1e-15);
        assert!((bound.shell_masses[1] - 0.4).abs() < 1e-15);
        assert_eq!(bound.residual, 0.0);
        assert!((bound.upper_bound - 0.4).abs() < 1e-15);
    }

    #[test]
    fn rs_bound_equals_exact_on_p2_and_c4() {
        for (g, want) in [(p2(), 0.8), (c4(), 0.6)] {
            let (r, _) = rs_lower_bound(&g, 0, 1, 1, 0.4, 3, Strategy::Greedy).unwrap();
            assert!((r.kappa - want).abs() < 1e-12);
            let exact = exact_orc(&g, 0, 1, 1, 0.4).unwrap();
            assert!((exact.kappa - want).abs() < 1e-12);
        }
    }

    #[test]
    fn rs_bound_never_exceeds_exact_on_grid() {
        let g = gen_grid(3, 3).unwrap();
        for (x, y) in g.edges().collect::<Vec<_>>() {
            for k in 1..=2usize {
                for l in [0usize, 1, 3] {
                    for strategy in [Strategy::Greedy, Strategy::MaxFlow] {
                        let (r, bound) = rs_lower_bound(&g, x, y, k, 0.4, l, strategy).unwrap();
                        let exact = exact_orc(&g, x, y, k, 0.4).unwrap();
                        assert!(
                            r.kappa <= exact.kappa + 1e-9,
                            "bound {} above exact {} at ({x},{y}) k={k} l={l}",
                            r.kappa,
                            exact.kappa
                        );
                        let total: f64 = bound.shell_masses.iter().sum::<f64>() + bound.residual;
                        assert!((total - 1.0).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn maxflow_matches_at_least_greedy_on_shell_zero() {
        let g = gen_grid(3, 4).unwrap();
        for (x, y) in [(0usize, 1usize), (1, 5), (5, 6)] {
            let (mx, my) = measures(&g, x, y, 2);
            let shells = shells_for(&g, &mx, &my, 3, 5);
            let greedy = shell_transport(&mx, &my, &shells, Strategy::Greedy).unwrap();
            let maxflow = shell_transport(&mx, &my, &shells, Strategy::MaxFlow).unwrap();
            assert!(maxflow.shell_masses[0] >= greedy.shell_masses[0] - 1e-12);
        }
    }

    #[test]
    fn residual_without_distance_is_an_error() {
        // Cap 1 on P3 leaves the (0, 2) pair unknown while it still holds
        // residual mass, which the transport must refuse to price.
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let (mx, my) = measures(&g, 0, 2, 1);
        let dist = pairwise_distances(&g, &mx.support(), &my.support(), 1).unwrap();
        let shells = build_shells(dist, 0);
        let err = shell_transport(&mx, &my, &shells, Strategy::Greedy).unwrap_err();
        assert!(matches!(err, Error::ResidualDistanceUnknown { .. }));
    }

    #[test]
    fn partial_plan_completes_to_feasible_coupling() {
        // Assemble pi_<=l plus a residual coupling and check it against the
        // marginal validator; its cost must not exceed the bound.
        let g = gen_grid(3, 3).unwrap();
        for l in [0usize, 1] {
            let (mx, my) = measures(&g, 0, 4, 1);
            let shells = shells_for(&g, &mx, &my, l, 3);
            let bound = shell_transport(&mx, &my, &shells, Strategy::Greedy).unwrap();

            let sx = mx.support();
            let sy = my.support();
            let mut flows = bound.partial_plan.clone();
            // Northwest-corner completion of the residual marginals.
            let mut rx: Vec<(usize, f64)> = bound
                .residual_x
                .iter()
                .map(|&(node, m)| (sx.iter().position(|&v| v == node).unwrap(), m))
                .collect();
            let mut ry: Vec<(usize, f64)> = bound
                .residual_y
                .iter()
                .map(|&(node, m)| (sy.iter().position(|&v| v == node).unwrap(), m))
                .collect();
            let mut completion_cost = 0.0;
            let (mut i, mut j) = (0, 0);
            while i < rx.len() && j < ry.len() {
                let f = rx[i].1.min(ry[j].1);
                if f > 0.0 {
                    flows.push((rx[i].0, ry[j].0, f));
                    completion_cost += f * shells.dist.raw(rx[i].0, ry[j].0) as f64;
                }
                rx[i].1 -= f;
                ry[j].1 -= f;
                if rx[i].1 <= 0.0 {
                    i += 1;
                }
                if j < ry.len() && ry[j].1 <= 0.0 {
                    j += 1;
                }
            }

            let mut cost_data = Vec::new();
            for i in 0..sx.len() {
                for j in 0..sy.len() {
                    cost_data.push(shells.dist.raw(i, j));
                }
            }
            let plan = TransportPlan {
                row_nodes: sx.clone(),
                col_nodes: sy.clone(),
                flows,
                cost_matrix: CostMatrix::new(sx.len(), sy.len(), cost_data).unwrap(),
            };
            let report = verify_plan(&plan, &mx, &my, 1e-10);
            assert!(report.is_ok(), "completion infeasible at l={l}: {:?}", report.violations);
            // The residual part costs at most r_bar per unit, so the whole
            // coupling stays under the bound.
            assert!(completion_cost <= bound.r_bar as f64 * bound.residual + 1e-12);
            assert!(plan.total_cost() <= bound.upper_bound + 1e-12);
        }
    }

    #[test]
    fn fixed_cap_bound_is_monotone_in_l() {
        let g = gen_grid(3, 4).unwrap();
        let cap = 1 + 2 * 2;
        for (x, y) in [(0usize, 1usize), (5, 6)] {
            let (mx, my) = measures(&g, x, y, 2);
            let mut prev = f64::INFINITY;
            for l in 0..=4usize {
                let shells = shells_for(&g, &mx, &my, l, cap);
                let b = shell_transport(&mx, &my, &shells, Strategy::Greedy).unwrap();
                let weighted: f64 =
                    b.shell_masses.iter().enumerate().map(|(r, &m)| r as f64 * m).sum();
                let u_fixed = weighted + cap as f64 * b.residual;
                assert!(u_fixed <= prev + 1e-12, "l={l}: {u_fixed} > {prev}");
                prev = u_fixed;
            }
        }
    }

    #[test]
    fn rs_rejects_identical_nodes() {
        let err = rs_lower_bound(&p2(), 1, 1, 1, 0.4, 3, Strategy::Greedy).unwrap_err();
        assert_eq!(err, Error::IdenticalNodes { node: 1 });
    }
}
