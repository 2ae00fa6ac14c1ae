//! Seeded random instances for tests and benchmarks.

use alloc::{format, vec::Vec};

use rand::{seq::SliceRandom, Rng};

use crate::{
    graph::{Cost, Graph, NodeId},
    instance::SteinerInstance,
};

/// Parameters of a random connected instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomInstance {
    pub nodes: usize,
    pub terminals: usize,
    pub max_weight: Cost,
    /// Probability of each non-tree pair becoming an edge.
    pub density: f64,
}

impl RandomInstance {
    /// A random spanning tree (node `i` hooks onto a uniformly chosen earlier
    /// node) plus independent extra edges, weights uniform in `1..=max_weight`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, name_id: usize) -> SteinerInstance {
        let n = self.nodes.max(1);
        let mut edges: Vec<(NodeId, NodeId, Cost)> = Vec::new();
        let mut order: Vec<NodeId> = (0..n).collect();
        order.shuffle(rng);
        for i in 1..n {
            let j = rng.random_range(0..i);
            edges.push((order[i], order[j], rng.random_range(1..=self.max_weight)));
        }
        for a in 0..n {
            for b in a + 1..n {
                if rng.random_bool(self.density) {
                    edges.push((a, b, rng.random_range(1..=self.max_weight)));
                }
            }
        }
        let graph = Graph::new(n, edges).expect("generated ids are in range");
        let mut nodes: Vec<NodeId> = (0..n).collect();
        nodes.shuffle(rng);
        let k = self.terminals.clamp(1, n);
        SteinerInstance::new(format!("rand{name_id}"), graph, nodes[..k].iter().copied())
            .expect("generated graph is connected")
    }
}
