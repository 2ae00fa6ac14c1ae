use alloc::{vec, vec::Vec};

use super::{paths::dijkstra_filtered, Cost, Graph, NodeId, INFINITE_COST};
use crate::error::{Error, Result};

const NO_PRED: u32 = u32::MAX;

/// Dense all-pairs shortest path distances with path reconstruction.
///
/// `pred(u, v)` is the node preceding `v` on the stored shortest `u`-`v`
/// path, so any pair expands into a walk of the original graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Metric {
    n: usize,
    dist: Vec<Cost>,
    pred: Vec<u32>,
}

impl Metric {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn dist(&self, u: NodeId, v: NodeId) -> Cost {
        self.dist[u * self.n + v]
    }

    pub fn row(&self, u: NodeId) -> &[Cost] {
        &self.dist[u * self.n..(u + 1) * self.n]
    }

    pub fn pred(&self, u: NodeId, v: NodeId) -> Option<NodeId> {
        match self.pred[u * self.n + v] {
            NO_PRED => None,
            p => Some(p as NodeId),
        }
    }

    /// Node sequence of the shortest `u`-`v` path in the original graph.
    pub fn expand(&self, u: NodeId, v: NodeId) -> Result<Vec<NodeId>> {
        if u >= self.n {
            return Err(Error::NodeOutOfRange(u));
        }
        if v >= self.n {
            return Err(Error::NodeOutOfRange(v));
        }
        let mut path = vec![v];
        let mut cur = v;
        while cur != u {
            cur = self.pred(u, cur).ok_or(Error::Disconnected(u, v))?;
            path.push(cur);
        }
        path.reverse();
        Ok(path)
    }
}

/// Shortest path distances between every pair of nodes, one Dijkstra per node.
pub fn metric_closure(graph: &Graph) -> Result<Metric> {
    let n = graph.node_count();
    let mut dist = Vec::with_capacity(n * n);
    let mut pred = Vec::with_capacity(n * n);
    for s in 0..n {
        let forest = dijkstra_filtered(graph, &[s], |_| true);
        if let Some(far) = forest.dist.iter().position(|&d| d == INFINITE_COST) {
            return Err(Error::Disconnected(s.min(far), s.max(far)));
        }
        dist.extend_from_slice(&forest.dist);
        pred.extend(forest.pred.iter().map(|p| p.map_or(NO_PRED, |p| p as u32)));
    }
    Ok(Metric { n, dist, pred })
}
