use alloc::{format, vec, vec::Vec};

use crate::{
    error::{Error, Result},
    graph::{dijkstra_filtered, Cost, Edge, Graph, NodeId, INFINITE_COST},
};

use super::components::DirectedComponent;

/// Shortest paths from every node whose internal nodes are non-terminals.
#[derive(Debug, Clone)]
pub struct FilteredDistances {
    n: usize,
    dist: Vec<Cost>,
    pred: Vec<u32>,
}

const NO_PRED: u32 = u32::MAX;

impl FilteredDistances {
    pub fn new(graph: &Graph, is_terminal: &[bool]) -> Self {
        let n = graph.node_count();
        let mut dist = Vec::with_capacity(n * n);
        let mut pred = Vec::with_capacity(n * n);
        for s in 0..n {
            let forest = dijkstra_filtered(graph, &[s], |v| !is_terminal[v]);
            dist.extend_from_slice(&forest.dist);
            pred.extend(forest.pred.iter().map(|p| p.map_or(NO_PRED, |p| p as u32)));
        }
        FilteredDistances { n, dist, pred }
    }

    pub fn dist(&self, a: NodeId, b: NodeId) -> Cost {
        self.dist[a * self.n + b]
    }

    /// Node sequence from `a` to `b`, or `None` if no such path exists.
    pub fn path(&self, a: NodeId, b: NodeId) -> Option<Vec<NodeId>> {
        if self.dist(a, b) == INFINITE_COST {
            return None;
        }
        let mut path = vec![b];
        let mut cur = b;
        while cur != a {
            let p = self.pred[a * self.n + cur];
            if p == NO_PRED {
                return None;
            }
            cur = p as usize;
            path.push(cur);
        }
        path.reverse();
        Some(path)
    }
}

/// Terminals merged so far. Every active terminal stands for the original
/// terminals contracted into it; Steiner nodes are never merged.
#[derive(Debug, Clone)]
pub struct ContractionState {
    is_terminal: Vec<bool>,
    /// Current representative of every original terminal.
    owner: Vec<NodeId>,
    members: Vec<Vec<NodeId>>,
    active: Vec<NodeId>,
    nonterminals: Vec<NodeId>,
    accumulated: Vec<Edge>,
}

impl ContractionState {
    pub fn new(node_count: usize, terminals: &[NodeId]) -> Self {
        let mut is_terminal = vec![false; node_count];
        for &t in terminals {
            is_terminal[t] = true;
        }
        let mut active = terminals.to_vec();
        active.sort_unstable();
        active.dedup();
        ContractionState {
            owner: (0..node_count).collect(),
            members: (0..node_count).map(|v| if is_terminal[v] { vec![v] } else { Vec::new() }).collect(),
            nonterminals: (0..node_count).filter(|&v| !is_terminal[v]).collect(),
            is_terminal,
            active,
            accumulated: Vec::new(),
        }
    }

    /// Active terminals in increasing id order.
    pub fn active(&self) -> &[NodeId] {
        &self.active
    }

    pub fn nonterminals(&self) -> &[NodeId] {
        &self.nonterminals
    }

    /// Original terminals merged into the active terminal `t`.
    pub fn members(&self, t: NodeId) -> &[NodeId] {
        &self.members[t]
    }

    /// Active terminal an original terminal has been merged into.
    pub fn representative(&self, t: NodeId) -> Option<NodeId> {
        self.is_terminal.get(t).copied().unwrap_or(false).then(|| self.owner[t])
    }

    pub fn is_terminal(&self, v: NodeId) -> bool {
        self.is_terminal[v]
    }

    /// Edges of every contracted component so far.
    pub fn accumulated(&self) -> &[Edge] {
        &self.accumulated
    }

    /// Distance between two active terminals or Steiner nodes: the smallest
    /// filtered distance between their members.
    pub fn distance(&self, dists: &FilteredDistances, a: NodeId, b: NodeId) -> (Cost, NodeId, NodeId) {
        let ma: &[NodeId] = if self.is_terminal[a] { &self.members[a] } else { core::slice::from_ref(&a) };
        let mb: &[NodeId] = if self.is_terminal[b] { &self.members[b] } else { core::slice::from_ref(&b) };
        let mut best = (INFINITE_COST, a, b);
        for &x in ma {
            for &y in mb {
                let d = dists.dist(x, y);
                if d < best.0 {
                    best = (d, x, y);
                }
            }
        }
        best
    }

    /// Merges the component's sources into its sink and keeps its tree.
    pub fn contract(&mut self, component: &DirectedComponent, tree: Vec<Edge>) -> Result<()> {
        for &t in &component.terminals {
            if self.active.binary_search(&t).is_err() {
                return Err(Error::InvalidState(format!("terminal {t} is not active")));
            }
        }
        let sink = component.sink;
        for &s in component.terminals.iter().filter(|&&s| s != sink) {
            let moved = core::mem::take(&mut self.members[s]);
            for &m in &moved {
                self.owner[m] = sink;
            }
            self.members[sink].extend(moved);
            let at = self.active.binary_search(&s).expect("checked above");
            self.active.remove(at);
        }
        self.accumulated.extend(tree);
        Ok(())
    }
}
