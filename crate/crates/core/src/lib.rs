//! Steiner tree algorithms over undirected graphs with non-negative integer
//! edge costs.
//!
//! The crate is `no_std` (it needs `alloc`) and contains everything that does
//! not touch the outside world:
//!
//! - [`graph`]: shortest paths, metric closure, spanning trees, Voronoi
//!   regions of terminals and minimum directed s-t cuts
//! - [`greedy`]: MST of the terminal distance network built from one
//!   multi-source Dijkstra pass
//! - [`zelikovsky`]: the 11/6-approximation driven by [`local_search`]
//! - [`exact`]: Dreyfus-Wagner over terminal subsets with a reusable memo
//! - [`lp`]: a small bounded revised simplex with warm-started re-solves
//! - [`iterative_rounding`] and [`steiner_ir`]: the randomized
//!   LP-rounding algorithm over directed components
//! - [`multistart`]: shortest path heuristic seeds improved by three local
//!   search move families
//!
//! Cooperative cancellation goes through the [`Deadline`] trait; the std
//! companion crate implements it with a wall clock.

#![no_std]

extern crate alloc;

pub mod deadline;
pub mod error;
pub mod exact;
pub mod fixtures;
pub mod generate;
pub mod graph;
pub mod greedy;
pub mod instance;
pub mod iterative_rounding;
pub mod local_search;
pub mod lp;
pub mod multistart;
pub mod steiner_ir;
pub mod zelikovsky;

pub use crate::{
    deadline::{Deadline, Unlimited},
    error::{Error, Result},
    graph::{Cost, Edge, Graph, Metric, NodeId, TreeEdges, INFINITE_COST},
    instance::{validate_tree, SteinerInstance, SteinerTree},
};
