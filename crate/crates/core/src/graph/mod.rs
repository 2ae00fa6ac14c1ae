//! Graph primitives shared by every solver.

use alloc::{string::ToString, vec, vec::Vec};

use crate::error::{Error, Result};

mod flow;
mod metric;
mod paths;
mod union_find;

pub use flow::{min_st_cut, Capacity, FlowNetwork, StCut};
pub use metric::{metric_closure, Metric};
pub use paths::{multi_source_dijkstra, voronoi_regions, ShortestPathForest, VoronoiPartition};
pub use union_find::UnionFind;
pub(crate) use paths::dijkstra_filtered;

pub type NodeId = usize;
pub type Cost = u64;

/// Distance of an unreachable node.
pub const INFINITE_COST: Cost = Cost::MAX;

/// An undirected edge stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub weight: Cost,
}

impl Edge {
    pub fn new(a: NodeId, b: NodeId, weight: Cost) -> Self {
        let (u, v) = if a <= b { (a, b) } else { (b, a) };
        Edge { u, v, weight }
    }

    /// Kruskal order: weight, then smaller endpoint, then larger endpoint.
    fn mst_key(&self) -> (Cost, NodeId, NodeId) {
        (self.weight, self.u, self.v)
    }
}

/// Undirected graph with non-negative integer costs.
///
/// Parallel edges are collapsed to the cheapest one on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<(NodeId, Cost)>>,
    edges: Vec<Edge>,
}

impl Graph {
    pub fn new<I>(node_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId, Cost)>,
    {
        if node_count == 0 {
            return Err(Error::NoNodes);
        }
        let mut list = Vec::new();
        for (a, b, w) in edges {
            if a >= node_count {
                return Err(Error::NodeOutOfRange(a));
            }
            if b >= node_count {
                return Err(Error::NodeOutOfRange(b));
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            list.push(Edge::new(a, b, w));
        }
        list.sort_unstable();
        list.dedup_by(|later, first| later.u == first.u && later.v == first.v);

        let mut adj = vec![Vec::new(); node_count];
        for e in &list {
            adj[e.u].push((e.v, e.weight));
            adj[e.v].push((e.u, e.weight));
        }
        for row in &mut adj {
            row.sort_unstable();
        }
        Ok(Graph { adj, edges: list })
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonical edges, sorted by `(u, v)`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Neighbours of `node` with edge costs, sorted by neighbour id.
    pub fn neighbors(&self, node: NodeId) -> &[(NodeId, Cost)] {
        &self.adj[node]
    }

    pub fn degree(&self, node: NodeId) -> usize {
        self.adj[node].len()
    }

    pub fn weight(&self, a: NodeId, b: NodeId) -> Option<Cost> {
        let row = self.adj.get(a)?;
        row.binary_search_by_key(&b, |&(n, _)| n).ok().map(|i| row[i].1)
    }

    pub fn check_node(&self, node: NodeId) -> Result<()> {
        if node < self.node_count() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange(node))
        }
    }

    /// Nodes reachable from `start`, in increasing id order.
    pub fn component_of(&self, start: NodeId) -> Vec<NodeId> {
        let mut seen = vec![false; self.node_count()];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(n) = stack.pop() {
            for &(m, _) in &self.adj[n] {
                if !seen[m] {
                    seen[m] = true;
                    stack.push(m);
                }
            }
        }
        (0..self.node_count()).filter(|&n| seen[n]).collect()
    }

    /// The subgraph induced by `nodes` (any order, no duplicates), renumbered
    /// in the given order. Returns the graph and the old id of every new id.
    pub fn induced(&self, nodes: &[NodeId]) -> Result<(Graph, Vec<NodeId>)> {
        let mut new_id = vec![usize::MAX; self.node_count()];
        for (i, &n) in nodes.iter().enumerate() {
            self.check_node(n)?;
            new_id[n] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| new_id[e.u] != usize::MAX && new_id[e.v] != usize::MAX)
            .map(|e| (new_id[e.u], new_id[e.v], e.weight));
        Ok((Graph::new(nodes.len(), edges)?, nodes.to_vec()))
    }
}

/// A set of tree edges with its total cost.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TreeEdges {
    pub edges: Vec<Edge>,
    pub cost: Cost,
}

impl TreeEdges {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_edges(mut edges: Vec<Edge>) -> Self {
        edges.sort_unstable();
        let cost = edges.iter().map(|e| e.weight).sum();
        TreeEdges { edges, cost }
    }

    /// Nodes touched by at least one edge, sorted.
    pub fn nodes(&self) -> Vec<NodeId> {
        let mut nodes: Vec<NodeId> = self.edges.iter().flat_map(|e| [e.u, e.v]).collect();
        nodes.sort_unstable();
        nodes.dedup();
        nodes
    }
}

/// Something that can list the weighted edges among a node subset.
pub trait EdgeSource {
    fn node_count(&self) -> usize;

    /// All edges with both endpoints in `nodes`.
    fn induced_edges(&self, nodes: &[NodeId]) -> Vec<Edge>;
}

impl EdgeSource for Graph {
    fn node_count(&self) -> usize {
        self.adj.len()
    }

    fn induced_edges(&self, nodes: &[NodeId]) -> Vec<Edge> {
        let mut member = vec![false; self.adj.len()];
        for &n in nodes {
            member[n] = true;
        }
        let mut out = Vec::new();
        for &n in nodes {
            for &(m, w) in &self.adj[n] {
                if n < m && member[m] {
                    out.push(Edge { u: n, v: m, weight: w });
                }
            }
        }
        out
    }
}

impl EdgeSource for Metric {
    fn node_count(&self) -> usize {
        self.len()
    }

    fn induced_edges(&self, nodes: &[NodeId]) -> Vec<Edge> {
        let mut out = Vec::with_capacity(nodes.len() * nodes.len() / 2);
        for (i, &a) in nodes.iter().enumerate() {
            for &b in &nodes[i + 1..] {
                let d = self.dist(a, b);
                if d != INFINITE_COST {
                    out.push(Edge::new(a, b, d));
                }
            }
        }
        out
    }
}

/// Minimum spanning forest of `edges` by Kruskal with the `(weight, u, v)`
/// tie-break. `node_count` bounds the endpoint ids.
pub fn kruskal(node_count: usize, mut edges: Vec<Edge>) -> Vec<Edge> {
    edges.sort_unstable_by_key(Edge::mst_key);
    let mut uf = UnionFind::new(node_count);
    edges.into_iter().filter(|e| uf.union(e.u, e.v)).collect()
}

/// Minimum spanning tree of the subgraph (or metric) induced by `nodes`.
pub fn mst<S: EdgeSource + ?Sized>(source: &S, nodes: &[NodeId]) -> Result<TreeEdges> {
    if nodes.is_empty() {
        return Err(Error::EmptyNodeSet);
    }
    let mut nodes = nodes.to_vec();
    nodes.sort_unstable();
    nodes.dedup();
    if let Some(&bad) = nodes.iter().find(|&&n| n >= source.node_count()) {
        return Err(Error::NodeOutOfRange(bad));
    }
    let tree = kruskal(source.node_count(), source.induced_edges(&nodes));
    if tree.len() + 1 != nodes.len() {
        let mut uf = UnionFind::new(source.node_count());
        for e in &tree {
            uf.union(e.u, e.v);
        }
        let first = nodes[0];
        let other = nodes.iter().copied().find(|&n| !uf.same(first, n)).unwrap_or(first);
        return Err(Error::Disconnected(first, other));
    }
    Ok(TreeEdges::from_edges(tree))
}

/// Turns an arbitrary edge multiset into a tree spanning `terminals`: keeps one
/// copy of each edge, takes a minimum spanning forest, and strips non-terminal
/// leaves until none remain.
pub fn assemble_tree<I>(node_count: usize, edges: I, terminals: &[NodeId]) -> Result<TreeEdges>
where
    I: IntoIterator<Item = Edge>,
{
    let mut edges: Vec<Edge> = edges.into_iter().collect();
    edges.sort_unstable();
    edges.dedup_by(|b, a| a.u == b.u && a.v == b.v);
    let forest = kruskal(node_count, edges);

    let mut is_terminal = vec![false; node_count];
    for &t in terminals {
        is_terminal[t] = true;
    }
    let kept = prune_leaves(node_count, forest, &is_terminal);

    if let Some((&first, rest)) = terminals.split_first() {
        let mut uf = UnionFind::new(node_count);
        for e in &kept {
            uf.union(e.u, e.v);
        }
        if let Some(&t) = rest.iter().find(|&&t| !uf.same(first, t)) {
            return Err(Error::Disconnected(first, t));
        }
        // Drop any stray component not containing the terminals.
        let kept: Vec<Edge> = kept.into_iter().filter(|e| uf.same(e.u, first)).collect();
        return Ok(TreeEdges::from_edges(kept));
    }
    Ok(TreeEdges::from_edges(kept))
}

/// Repeatedly removes edges hanging off non-terminal leaves.
pub fn prune_leaves(node_count: usize, edges: Vec<Edge>, is_terminal: &[bool]) -> Vec<Edge> {
    let mut degree = vec![0usize; node_count];
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); node_count];
    for (i, e) in edges.iter().enumerate() {
        degree[e.u] += 1;
        degree[e.v] += 1;
        incident[e.u].push(i);
        incident[e.v].push(i);
    }
    let mut alive = vec![true; edges.len()];
    let mut stack: Vec<NodeId> =
        (0..node_count).filter(|&n| degree[n] == 1 && !is_terminal[n]).collect();
    while let Some(n) = stack.pop() {
        if degree[n] != 1 {
            continue;
        }
        let Some(&ei) = incident[n].iter().find(|&&ei| alive[ei]) else {
            continue;
        };
        alive[ei] = false;
        let e = edges[ei];
        let other = if e.u == n { e.v } else { e.u };
        degree[n] = 0;
        degree[other] -= 1;
        if degree[other] == 1 && !is_terminal[other] {
            stack.push(other);
        }
    }
    edges.into_iter().zip(alive).filter(|(_, a)| *a).map(|(e, _)| e).collect()
}

/// Checks that `edges` form a single tree (connected, acyclic) over the nodes
/// they touch.
pub fn check_tree(node_count: usize, edges: &[Edge]) -> Result<()> {
    let mut uf = UnionFind::new(node_count);
    for e in edges {
        if e.u >= node_count || e.v >= node_count {
            return Err(Error::NodeOutOfRange(e.u.max(e.v)));
        }
        if !uf.union(e.u, e.v) {
            return Err(Error::NotATree("edge set contains a cycle".to_string()));
        }
    }
    if let Some(first) = edges.first() {
        if edges.iter().any(|e| !uf.same(first.u, e.u)) {
            return Err(Error::NotATree("edge set is disconnected".to_string()));
        }
    }
    Ok(())
}
