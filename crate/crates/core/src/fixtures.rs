//! Tiny hand-checkable instances used throughout the tests and docs.

use crate::{graph::Graph, instance::SteinerInstance};

/// Terminals 0, 1, 2 each joined to the Steiner node 3 by a unit edge.
pub fn star3() -> SteinerInstance {
    let g = Graph::new(4, [(0, 3, 1), (1, 3, 1), (2, 3, 1)]).expect("valid graph");
    SteinerInstance::new("star3", g, [0, 1, 2]).expect("valid instance").with_best_known(3)
}

/// Path 0 - 1 - 2 with unit edges; terminals are the two ends.
pub fn path3() -> SteinerInstance {
    let g = Graph::new(3, [(0, 1, 1), (1, 2, 1)]).expect("valid graph");
    SteinerInstance::new("path3", g, [0, 2]).expect("valid instance").with_best_known(2)
}

/// Terminals 0, 1, 2. Every path between 0 and 1 runs through terminal 2;
/// 0 and 2 meet through Steiner node 3, 1 and 2 through Steiner node 4.
pub fn blocked_pair() -> SteinerInstance {
    let g = Graph::new(5, [(0, 3, 1), (3, 2, 1), (2, 4, 1), (4, 1, 1)]).expect("valid graph");
    SteinerInstance::new("blocked_pair", g, [0, 1, 2]).expect("valid instance").with_best_known(4)
}
