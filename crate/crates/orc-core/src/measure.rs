//! k-hop lazy random-walk measures.
//!
//! The measure at `x` mixes the k-step simple-random-walk distribution with a
//! point mass kept at the center: `mu(y) = (1 - alpha) * P^k(x, y) + alpha * [y == x]`.
//! `P^k` is never materialized; the walk distribution is pushed k times
//! through the sparse transition operator.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Sparse distribution over node ids. BTreeMap keeps the support ordered,
/// which downstream shell processing relies on.
pub type SparseDist = BTreeMap<usize, f64>;

/// A k-hop lazy random-walk measure centered at one node.
///
/// Total mass is 1 (within 1e-12), the support lies in the k-hop ball of the
/// center, and the center keeps at least `laziness` mass.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalMeasure {
    center: usize,
    hop: usize,
    laziness: f64,
    mass: SparseDist,
}

impl LocalMeasure {
    /// Wraps an explicit distribution, checking it is a probability measure.
    pub fn from_parts(center: usize, hop: usize, laziness: f64, mass: SparseDist) -> Result<Self> {
        let total: f64 = mass.values().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "measure mass sums to {total}, expected 1"
            )));
        }
        if mass.values().any(|&m| m < 0.0) {
            return Err(Error::InvalidParameter("negative mass entry".into()));
        }
        Ok(LocalMeasure { center, hop, laziness, mass })
    }

    pub fn center(&self) -> usize {
        self.center
    }

    pub fn hop(&self) -> usize {
        self.hop
    }

    pub fn laziness(&self) -> f64 {
        self.laziness
    }

    pub fn mass(&self, v: usize) -> f64 {
        self.mass.get(&v).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.mass.values().sum()
    }

    /// Support nodes, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.mass.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.mass.iter().map(|(&v, &m)| (v, m))
    }

    pub fn len(&self) -> usize {
        self.mass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mass.is_empty()
    }

    /// Masses in support order; pairs with [`Self::support`].
    pub fn masses(&self) -> Vec<f64> {
        self.mass.values().copied().collect()
    }
}

/// One application of the simple-random-walk operator: mass at `u` spreads
/// uniformly over its neighbors.
pub fn transition_step(g: &Graph, dist: &SparseDist) -> Result<SparseDist> {
    let mut out = SparseDist::new();
    for (&u, &m) in dist {
        let deg = g.degree(u);
        if deg == 0 {
            return Err(Error::IsolatedNode { node: u });
        }
        let share = m / deg as f64;
        for &v in g.neighbors(u) {
            *out.entry(v).or_insert(0.0) += share;
        }
    }
    Ok(out)
}

/// The k-hop lazy measure at `x`. Entries below 1e-15 are kept; pruning would
/// break exact marginal checks downstream.
pub fn k_hop_measure(g: &Graph, x: usize, k: usize, alpha: f64) -> Result<LocalMeasure> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!("alpha = {alpha} outside (0, 1)")));
    }
    if k < 1 {
        return Err(Error::InvalidParameter("hop count k must be >= 1".into()));
    }
    if x >= g.node_count() {
        return Err(Error::NodeOutOfRange { node: x, nodes: g.node_count() });
    }
    let mut walk = SparseDist::new();
    walk.insert(x, 1.0);
    for _ in 0..k {
        walk = transition_step(g, &walk)?;
    }
    let mut mass = SparseDist::new();
    for (v, m) in walk {
        mass.insert(v, (1.0 - alpha) * m);
    }
    *mass.entry(x).or_insert(0.0) += alpha;
    Ok(LocalMeasure { center: x, hop: k, laziness: alpha, mass })
}
