//! Ollivier-Ricci curvature for unweighted graphs.
//!
//! The curvature of a node pair compares the k-hop lazy random-walk
//! neighborhoods of its endpoints through optimal transport:
//! `kappa(x, y) = 1 - W1(mu_x, mu_y) / d(x, y)`.
//!
//! Two evaluation routes are provided:
//!
//! * [`transport::exact_orc`] solves the transportation problem exactly
//!   (network simplex over BFS hop distances) and serves as ground truth.
//! * [`shell_bound::rs_lower_bound`] computes the residual-shell lower
//!   bound: support pairs are grouped into shells by distance, mass is
//!   matched shell by shell from the cheapest outward, and whatever
//!   remains is charged at the worst residual-pair distance. The result
//!   never exceeds the exact curvature and costs a fraction of a solve.
//!
//! The crate is `no_std` (with `alloc`); everything here is pure
//! computation over immutable graphs. IO, timing, and the experiment
//! harness live in the companion `orc-bench` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod generate;
pub mod graph;
pub mod measure;
pub mod shell_bound;
pub mod transport;

pub use error::{Error, Result};
pub use graph::{DistMatrix, DistanceMap, Graph};
pub use measure::LocalMeasure;
pub use shell_bound::{build_shells, rs_lower_bound, shell_transport, ShellBound, ShellPartition, Strategy};
pub use transport::{exact_orc, exact_w1, solve_transport, CurvatureResult, Method, TransportPlan};
