use alloc::{collections::BinaryHeap, vec, vec::Vec};
use core::cmp::Reverse;

use super::{Cost, Graph, NodeId, INFINITE_COST};
use crate::error::{Error, Result};

/// Result of a (multi-source) Dijkstra run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortestPathForest {
    /// Distance to the nearest source, [`INFINITE_COST`] if unreachable.
    pub dist: Vec<Cost>,
    /// Nearest source; ties go to the lowest source id.
    pub nearest: Vec<Option<NodeId>>,
    /// Previous node on the path from `nearest`.
    pub pred: Vec<Option<NodeId>>,
}

impl ShortestPathForest {
    /// Path from the nearest source to `node`, both ends included.
    pub fn path_from_source(&self, node: NodeId) -> Option<Vec<NodeId>> {
        self.nearest[node]?;
        let mut path = vec![node];
        let mut cur = node;
        while let Some(p) = self.pred[cur] {
            path.push(p);
            cur = p;
        }
        path.reverse();
        Some(path)
    }
}

pub fn multi_source_dijkstra(graph: &Graph, sources: &[NodeId]) -> Result<ShortestPathForest> {
    if sources.is_empty() {
        return Err(Error::EmptySources);
    }
    for &s in sources {
        graph.check_node(s)?;
    }
    Ok(dijkstra_filtered(graph, sources, |_| true))
}

/// Dijkstra from several sources. Edges are only relaxed out of sources and
/// out of nodes for which `expand` holds, so a node failing `expand` can end a
/// path but never sit inside one.
pub(crate) fn dijkstra_filtered<F>(graph: &Graph, sources: &[NodeId], expand: F) -> ShortestPathForest
where
    F: Fn(NodeId) -> bool,
{
    let n = graph.node_count();
    let mut dist = vec![INFINITE_COST; n];
    let mut nearest: Vec<Option<NodeId>> = vec![None; n];
    let mut pred = vec![None; n];
    let mut done = vec![false; n];
    let mut is_source = vec![false; n];
    let mut heap = BinaryHeap::new();
    for &s in sources {
        is_source[s] = true;
        if nearest[s].is_none_or(|o| s < o) {
            dist[s] = 0;
            nearest[s] = Some(s);
        }
    }
    for &s in sources {
        if nearest[s] == Some(s) {
            heap.push(Reverse((0, s, s)));
        }
    }
    while let Some(Reverse((d, owner, node))) = heap.pop() {
        if done[node] || d != dist[node] || nearest[node] != Some(owner) {
            continue;
        }
        done[node] = true;
        if !is_source[node] && !expand(node) {
            continue;
        }
        for &(next, w) in graph.neighbors(node) {
            if done[next] {
                continue;
            }
            let nd = d.saturating_add(w);
            let better = match nearest[next] {
                None => true,
                Some(o) => nd < dist[next] || (nd == dist[next] && owner < o),
            };
            if better {
                dist[next] = nd;
                nearest[next] = Some(owner);
                pred[next] = Some(node);
                heap.push(Reverse((nd, owner, next)));
            }
        }
    }
    ShortestPathForest { dist, nearest, pred }
}

/// Assignment of every node to its closest terminal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoronoiPartition {
    /// Owning terminal; `None` only for nodes unreachable from every terminal.
    pub owner: Vec<Option<NodeId>>,
    pub dist_to_owner: Vec<Cost>,
}

pub fn voronoi_regions(graph: &Graph, terminals: &[NodeId]) -> Result<VoronoiPartition> {
    if terminals.is_empty() {
        return Err(Error::EmptyTerminals);
    }
    let forest = multi_source_dijkstra(graph, terminals)?;
    Ok(VoronoiPartition { owner: forest.nearest, dist_to_owner: forest.dist })
}
