//! Transportation-specialized network simplex.
//!
//! Bipartite min-cost flow between `m` supply nodes and `n` demand nodes over
//! the complete arc set, plus an artificial root used for the initial basis.
//! Costs are integers, so node potentials and reduced costs stay integral and
//! all pivot pricing is exact; only the flows are floating point.
//!
//! Degeneracy is handled with strongly feasible trees: the initial basis is
//! strongly feasible (every artificial arc carries positive mass) and the
//! leaving arc is the last blocking arc met when walking the pivot cycle from
//! the apex along the entering arc's orientation, which preserves the
//! property and rules out cycling.

use alloc::vec::Vec;

use crate::error::{Error, Result};

pub(super) struct SimplexOutcome {
    /// Flow per real arc, row-major `m x n`.
    pub flow: Vec<f64>,
    /// Node potentials: sources then sinks, with the artificial offset removed.
    pub dual_supply: Vec<i64>,
    pub dual_demand: Vec<i64>,
}

pub(super) fn solve(supply: &[f64], demand: &[f64], cost: &[u32]) -> Result<SimplexOutcome> {
    NetworkSimplex::new(supply, demand, cost).run()
}

struct NetworkSimplex<'a> {
    m: usize,
    n: usize,
    root: usize,
    art_cost: i64,
    cost: &'a [u32],
    flow: Vec<f64>,
    in_tree: Vec<bool>,
    // Per node: potential, tree parent, arc to parent, depth, children.
    pi: Vec<i64>,
    parent: Vec<usize>,
    parent_arc: Vec<usize>,
    depth: Vec<u32>,
    children: Vec<Vec<usize>>,
    block: usize,
    next_arc: usize,
}

const NO_ARC: usize = usize::MAX;

impl<'a> NetworkSimplex<'a> {
    fn new(supply: &[f64], demand: &[f64], cost: &'a [u32]) -> Self {
        let m = supply.len();
        let n = demand.len();
        debug_assert_eq!(cost.len(), m * n);
        let nodes = m + n + 1;
        let root = m + n;
        let max_cost = cost.iter().copied().max().unwrap_or(0) as i64;
        // Larger than any simple-path cost, so artificial arcs never price in.
        let art_cost = (max_cost + 1) * nodes as i64;

        let real = m * n;
        let mut flow = alloc::vec![0.0; real + m + n];
        let mut in_tree = alloc::vec![false; real + m + n];
        let mut pi = alloc::vec![0i64; nodes];
        let mut parent = alloc::vec![root; nodes];
        let mut parent_arc = alloc::vec![NO_ARC; nodes];
        let mut depth = alloc::vec![1u32; nodes];
        let mut children = alloc::vec![Vec::new(); nodes];

        depth[root] = 0;
        children[root] = (0..m + n).collect();
        for i in 0..m {
            let a = real + i;
            flow[a] = supply[i];
            in_tree[a] = true;
            parent_arc[i] = a;
            pi[i] = art_cost;
        }
        for j in 0..n {
            let a = real + m + j;
            flow[a] = demand[j];
            in_tree[a] = true;
            parent_arc[m + j] = a;
            pi[m + j] = -art_cost;
        }

        let block = ((real as f64).sqrt() as usize).max(8);
        NetworkSimplex {
            m,
            n,
            root,
            art_cost,
            cost,
            flow,
            in_tree,
            pi,
            parent,
            parent_arc,
            depth,
            children,
            block,
            next_arc: 0,
        }
    }

    fn arc_src(&self, a: usize) -> usize {
        let real = self.m * self.n;
        if a < real {
            a / self.n
        } else if a < real + self.m {
            a - real // supply -> root
        } else {
            self.root // root -> sink
        }
    }

    fn arc_dst(&self, a: usize) -> usize {
        let real = self.m * self.n;
        if a < real {
            self.m + a % self.n
        } else if a < real + self.m {
            self.root
        } else {
            self.m + (a - real - self.m)
        }
    }

    fn arc_cost(&self, a: usize) -> i64 {
        if a < self.m * self.n {
            self.cost[a] as i64
        } else {
            self.art_cost
        }
    }

    fn reduced_cost(&self, a: usize) -> i64 {
        self.arc_cost(a) - self.pi[self.arc_src(a)] + self.pi[self.arc_dst(a)]
    }

    /// Block pricing over the real arcs only; artificial arcs never re-enter.
    fn find_entering(&mut self) -> Option<usize> {
        let real = self.m * self.n;
        let mut best = None;
        let mut best_r = 0i64;
        let mut countdown = self.block;
        let mut a = self.next_arc;
        for _ in 0..real {
            if !self.in_tree[a] {
                let r = self.reduced_cost(a);
                if r < best_r {
                    best_r = r;
                    best = Some(a);
                }
            }
            a += 1;
            if a == real {
                a = 0;
            }
            countdown -= 1;
            if countdown == 0 {
                if best.is_some() {
                    self.next_arc = a;
                    return best;
                }
                countdown = self.block;
            }
        }
        self.next_arc = a;
        best
    }

    /// Arcs from `v` up to (excluding) `apex`, paired with the lower node.
    fn path_to(&self, mut v: usize, apex: usize) -> Vec<(usize, usize)> {
        let mut path = Vec::new();
        while v != apex {
            path.push((self.parent_arc[v], v));
            v = self.parent[v];
        }
        path
    }

    fn pivot(&mut self, entering: usize) {
        let p = self.arc_src(entering);
        let q = self.arc_dst(entering);
        let r_enter = self.reduced_cost(entering);

        // Apex = lowest common ancestor of the entering arc's endpoints.
        let (mut a, mut b) = (p, q);
        while self.depth[a] > self.depth[b] {
            a = self.parent[a];
        }
        while self.depth[b] > self.depth[a] {
            b = self.parent[b];
        }
        while a != b {
            a = self.parent[a];
            b = self.parent[b];
        }
        let apex = a;

        let path_p = self.path_to(p, apex);
        let path_q = self.path_to(q, apex);

        // Orientation follows the entering arc: apex -> p, entering, q -> apex.
        // On the way down to p the traversal runs parent -> node, so an arc is
        // with the flow iff it ends at the node; on the way up it is the
        // opposite.
        let down_aligned = |s: &Self, arc: usize, node: usize| s.arc_dst(arc) == node;
        let up_aligned = |s: &Self, arc: usize, node: usize| s.arc_src(arc) == node;

        let mut delta = f64::INFINITY;
        for &(arc, node) in &path_p {
            if !down_aligned(self, arc, node) {
                delta = delta.min(self.flow[arc]);
            }
        }
        for &(arc, node) in &path_q {
            if !up_aligned(self, arc, node) {
                delta = delta.min(self.flow[arc]);
            }
        }
        debug_assert!(delta.is_finite(), "transportation cycle must contain a reverse arc");

        // Leaving arc: last blocking arc in orientation order from the apex.
        let mut leaving: Option<(usize, usize, bool)> = None; // (arc, lower node, on p side)
        for &(arc, node) in path_p.iter().rev() {
            if !down_aligned(self, arc, node) && self.flow[arc] == delta {
                leaving = Some((arc, node, true));
            }
        }
        for &(arc, node) in &path_q {
            if !up_aligned(self, arc, node) && self.flow[arc] == delta {
                leaving = Some((arc, node, false));
            }
        }
        let (leave_arc, leave_node, on_p_side) =
            leaving.expect("a blocking arc always exists");

        // Push delta around the cycle.
        if delta > 0.0 {
            self.flow[entering] += delta;
            for &(arc, node) in &path_p {
                if down_aligned(self, arc, node) {
                    self.flow[arc] += delta;
                } else {
                    self.flow[arc] -= delta;
                }
            }
            for &(arc, node) in &path_q {
                if up_aligned(self, arc, node) {
                    self.flow[arc] += delta;
                } else {
                    self.flow[arc] -= delta;
                }
            }
        }

        self.in_tree[leave_arc] = false;
        self.in_tree[entering] = true;

        // The subtree hanging below the leaving arc is re-rooted at the
        // entering arc's endpoint inside it and re-attached to the rest.
        let (sub_root, attach) = if on_p_side { (p, q) } else { (q, p) };
        let old_parent = self.parent[leave_node];
        self.children[old_parent].retain(|&c| c != leave_node);

        let mut chain = Vec::new();
        let mut v = sub_root;
        loop {
            chain.push((v, self.parent_arc[v]));
            if v == leave_node {
                break;
            }
            v = self.parent[v];
        }
        // Reverse the parent pointers along sub_root -> leave_node.
        for w in chain.windows(2) {
            let (child, arc) = w[0];
            let (node, _) = w[1];
            self.children[node].retain(|&c| c != child);
            self.parent[node] = child;
            self.parent_arc[node] = arc;
            self.children[child].push(node);
        }
        self.parent[sub_root] = attach;
        self.parent_arc[sub_root] = entering;
        self.children[attach].push(sub_root);

        // Potentials in the moved subtree shift by a constant so the entering
        // arc's reduced cost becomes zero; depths are rebuilt alongside.
        let dpi = if on_p_side { r_enter } else { -r_enter };
        let mut stack = alloc::vec![sub_root];
        while let Some(x) = stack.pop() {
            self.pi[x] += dpi;
            self.depth[x] = self.depth[self.parent[x]] + 1;
            stack.extend(self.children[x].iter().copied());
        }
    }

    fn run(mut self) -> Result<SimplexOutcome> {
        let real = self.m * self.n;
        // Defensive ceiling; strongly feasible pivoting terminates well below.
        let limit = 64 * (real + self.m + self.n) + 1024;
        let mut pivots = 0usize;
        while let Some(entering) = self.find_entering() {
            self.pivot(entering);
            pivots += 1;
            if pivots > limit {
                return Err(Error::Internal("network simplex exceeded its pivot budget".into()));
            }
        }
        for a in real..real + self.m + self.n {
            if self.flow[a] > 1e-9 {
                return Err(Error::Internal(
                    "residual artificial flow after optimization".into(),
                ));
            }
        }
        let dual_supply = (0..self.m).map(|i| self.pi[i] - self.art_cost).collect();
        let dual_demand = (0..self.n).map(|j| self.art_cost - self.pi[self.m + j]).collect();
        self.flow.truncate(real);
        Ok(SimplexOutcome { flow: self.flow, dual_supply, dual_demand })
    }
}
