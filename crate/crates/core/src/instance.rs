use alloc::{format, string::String, vec, vec::Vec};

use crate::{
    error::{Error, Result},
    graph::{check_tree, Cost, Graph, NodeId, TreeEdges},
};

/// A Steiner tree: edges of the instance graph spanning every terminal.
pub type SteinerTree = TreeEdges;

/// Connected undirected graph plus the terminals a solution must span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SteinerInstance {
    pub name: String,
    pub graph: Graph,
    /// Sorted and duplicate free.
    pub terminals: Vec<NodeId>,
    pub best_known: Option<Cost>,
}

impl SteinerInstance {
    /// Builds an instance over a connected graph.
    pub fn new(name: impl Into<String>, graph: Graph, terminals: impl IntoIterator<Item = NodeId>) -> Result<Self> {
        let terminals = normalize_terminals(&graph, terminals)?;
        let reach = graph.component_of(terminals[0]);
        if reach.len() != graph.node_count() {
            let mut member = vec![false; graph.node_count()];
            reach.iter().for_each(|&n| member[n] = true);
            let missing = (0..graph.node_count()).find(|&n| !member[n]).unwrap_or(0);
            return Err(Error::Disconnected(terminals[0], missing));
        }
        Ok(SteinerInstance { name: name.into(), graph, terminals, best_known: None })
    }

    /// Restricts the graph to the component holding the terminals, renumbering
    /// nodes in increasing order. Fails if the terminals are split across
    /// components. Returns the instance and the original id of each node.
    pub fn trimmed(
        name: impl Into<String>,
        graph: Graph,
        terminals: impl IntoIterator<Item = NodeId>,
    ) -> Result<(Self, Vec<NodeId>)> {
        let terminals = normalize_terminals(&graph, terminals)?;
        let comp = graph.component_of(terminals[0]);
        let mut new_id = vec![usize::MAX; graph.node_count()];
        for (i, &n) in comp.iter().enumerate() {
            new_id[n] = i;
        }
        if let Some(&t) = terminals.iter().find(|&&t| new_id[t] == usize::MAX) {
            return Err(Error::Disconnected(terminals[0], t));
        }
        let (sub, old) = graph.induced(&comp)?;
        let inst = SteinerInstance::new(name, sub, terminals.iter().map(|&t| new_id[t]))?;
        Ok((inst, old))
    }

    pub fn with_best_known(mut self, cost: Cost) -> Self {
        self.best_known = Some(cost);
        self
    }

    pub fn is_terminal_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.graph.node_count()];
        for &t in &self.terminals {
            mask[t] = true;
        }
        mask
    }
}

fn normalize_terminals(graph: &Graph, terminals: impl IntoIterator<Item = NodeId>) -> Result<Vec<NodeId>> {
    let mut terminals: Vec<NodeId> = terminals.into_iter().collect();
    terminals.sort_unstable();
    terminals.dedup();
    if terminals.is_empty() {
        return Err(Error::EmptyTerminals);
    }
    if let Some(&bad) = terminals.iter().find(|&&t| t >= graph.node_count()) {
        return Err(Error::NodeOutOfRange(bad));
    }
    Ok(terminals)
}

/// Independently checks a solver's output: every edge exists in the graph
/// with the stated weight, the edges form one tree, all terminals are covered
/// and the stored cost equals the re-summed edge weights. Returns the cost.
pub fn validate_tree(instance: &SteinerInstance, tree: &SteinerTree) -> Result<Cost> {
    let g = &instance.graph;
    for e in &tree.edges {
        match g.weight(e.u, e.v) {
            Some(w) if w == e.weight => {}
            Some(w) => {
                return Err(Error::InvalidTree(format!(
                    "edge ({}, {}) has weight {} but the graph says {}",
                    e.u, e.v, e.weight, w
                )))
            }
            None => return Err(Error::InvalidTree(format!("edge ({}, {}) is not in the graph", e.u, e.v))),
        }
    }
    check_tree(g.node_count(), &tree.edges).map_err(|e| Error::InvalidTree(format!("{e}")))?;
    if instance.terminals.len() > 1 {
        let mut touched = vec![false; g.node_count()];
        for e in &tree.edges {
            touched[e.u] = true;
            touched[e.v] = true;
        }
        if let Some(&t) = instance.terminals.iter().find(|&&t| !touched[t]) {
            return Err(Error::InvalidTree(format!("terminal {t} is not spanned")));
        }
    }
    let sum: Cost = tree.edges.iter().map(|e| e.weight).sum();
    if sum != tree.cost {
        return Err(Error::InvalidTree(format!("stated cost {} but edges sum to {}", tree.cost, sum)));
    }
    Ok(sum)
}
