//! Minimum spanning tree of the terminal distance network, built from one
//! multi-source Dijkstra pass.
//!
//! Every original edge whose endpoints lie in different Voronoi regions
//! proposes an auxiliary edge between the two owning terminals, weighted by
//! the full terminal-to-terminal path through it. The MST of these auxiliary
//! edges has the weight of the MST over the terminal metric.

use alloc::{vec, vec::Vec};

use hashbrown::HashMap;

use crate::{
    error::{Error, Result},
    exact::expand_pairs,
    graph::{assemble_tree, kruskal, metric_closure, mst, multi_source_dijkstra, Cost, Edge, NodeId},
    instance::{SteinerInstance, SteinerTree},
};

/// Result of [`greedy_steiner`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyOutcome {
    /// Expanded tree after the final MST and leaf pruning.
    pub tree: SteinerTree,
    /// Weight of the MST over the terminal metric, before expansion.
    pub terminal_mst_weight: Cost,
}

pub fn greedy_steiner(instance: &SteinerInstance) -> Result<GreedyOutcome> {
    let graph = &instance.graph;
    let terminals = &instance.terminals;
    if terminals.is_empty() {
        return Err(Error::EmptyTerminals);
    }
    if terminals.len() == 1 {
        return Ok(GreedyOutcome { tree: SteinerTree::empty(), terminal_mst_weight: 0 });
    }
    let forest = multi_source_dijkstra(graph, terminals)?;

    // Cheapest crossing edge per pair of regions.
    let mut best: HashMap<(NodeId, NodeId), (Cost, Edge)> = HashMap::new();
    for e in graph.edges() {
        let (Some(a), Some(b)) = (forest.nearest[e.u], forest.nearest[e.v]) else {
            continue;
        };
        if a == b {
            continue;
        }
        let w = forest.dist[e.u] + e.weight + forest.dist[e.v];
        let key = (a.min(b), a.max(b));
        match best.get(&key) {
            Some(&(old, _)) if old <= w => {}
            _ => {
                best.insert(key, (w, *e));
            }
        }
    }

    let aux: Vec<Edge> = best.iter().map(|(&(a, b), &(w, _))| Edge::new(a, b, w)).collect();
    let aux_tree = kruskal(graph.node_count(), aux);
    if aux_tree.len() + 1 != terminals.len() {
        return Err(Error::Disconnected(terminals[0], terminals[terminals.len() - 1]));
    }
    let terminal_mst_weight = aux_tree.iter().map(|e| e.weight).sum();

    let mut edges = Vec::new();
    for a in &aux_tree {
        let (_, crossing) = best[&(a.u, a.v)];
        edges.push(crossing);
        for end in [crossing.u, crossing.v] {
            let path = forest.path_from_source(end).ok_or(Error::Disconnected(a.u, a.v))?;
            for w in path.windows(2) {
                let weight = graph.weight(w[0], w[1]).ok_or(Error::InvalidState("broken shortest path".into()))?;
                edges.push(Edge::new(w[0], w[1], weight));
            }
        }
    }
    let tree = assemble_tree(graph.node_count(), edges, terminals)?;
    Ok(GreedyOutcome { tree, terminal_mst_weight })
}

/// Same result computed from the full metric closure. Slow; kept as an
/// oracle for [`greedy_steiner`].
pub fn greedy_steiner_naive(instance: &SteinerInstance) -> Result<GreedyOutcome> {
    let terminals = &instance.terminals;
    if terminals.is_empty() {
        return Err(Error::EmptyTerminals);
    }
    if terminals.len() == 1 {
        return Ok(GreedyOutcome { tree: SteinerTree::empty(), terminal_mst_weight: 0 });
    }
    let metric = metric_closure(&instance.graph)?;
    let terminal_tree = mst(&metric, terminals)?;
    let pairs: Vec<(NodeId, NodeId)> = terminal_tree.edges.iter().map(|e| (e.u, e.v)).collect();
    let edges = expand_pairs(&metric, &pairs)?;
    let tree = assemble_tree(instance.graph.node_count(), edges, terminals)?;
    Ok(GreedyOutcome { tree, terminal_mst_weight: terminal_tree.cost })
}

/// Degree of every node in `tree`, for leaf checks.
pub fn tree_degrees(node_count: usize, tree: &SteinerTree) -> Vec<usize> {
    let mut deg = vec![0; node_count];
    for e in &tree.edges {
        deg[e.u] += 1;
        deg[e.v] += 1;
    }
    deg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{
        fixtures::{path3, star3},
        instance::validate_tree,
    };

    #[test]
    fn star3_terminal_mst() {
        let inst = star3();
        let out = greedy_steiner(&inst).unwrap();
        assert_eq!(out.terminal_mst_weight, 4);
        assert_eq!(validate_tree(&inst, &out.tree), Ok(out.tree.cost));
        assert!(out.tree.cost <= 4);
        assert_eq!(greedy_steiner_naive(&inst).unwrap().terminal_mst_weight, 4);
    }

    #[test]
    fn single_terminal_is_empty() {
        let inst = path3();
        let single = SteinerInstance::new("s", inst.graph.clone(), [2]).unwrap();
        let out = greedy_steiner(&single).unwrap();
        assert_eq!(out.tree, SteinerTree::empty());
        assert_eq!(out.terminal_mst_weight, 0);
    }

    #[test]
    fn path_is_returned_whole() {
        let inst = path3();
        let out = greedy_steiner(&inst).unwrap();
        assert_eq!(out.tree.cost, 2);
        assert_eq!(out.terminal_mst_weight, 2);
        assert_eq!(out.tree.nodes(), vec![0, 1, 2]);
    }

    #[test]
    fn no_steiner_leaves() {
        let inst = star3();
        let out = greedy_steiner(&inst).unwrap();
        let deg = tree_degrees(inst.graph.node_count(), &out.tree);
        for v in out.tree.nodes() {
            assert!(inst.terminals.contains(&v) || deg[v] >= 2);
        }
    }
}
