use alloc::{collections::VecDeque, vec, vec::Vec};

use crate::{
    error::Result,
    graph::{Graph, NodeId},
};

/// For each pair of terminals, whether a path joins them whose internal
/// nodes are all non-terminals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachabilityTable {
    terminals: Vec<NodeId>,
    words: usize,
    bits: Vec<u64>,
}

impl ReachabilityTable {
    pub fn terminals(&self) -> &[NodeId] {
        &self.terminals
    }

    /// By terminal positions.
    pub fn reachable_at(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    /// By node ids; `None` unless both are terminals.
    pub fn reachable(&self, a: NodeId, b: NodeId) -> Option<bool> {
        let i = self.terminals.binary_search(&a).ok()?;
        let j = self.terminals.binary_search(&b).ok()?;
        Some(self.reachable_at(i, j))
    }

    /// Whether every pair of the given terminal positions is reachable.
    pub fn pairwise(&self, positions: &[usize]) -> bool {
        positions.iter().enumerate().all(|(x, &i)| positions[x + 1..].iter().all(|&j| self.reachable_at(i, j)))
    }
}

/// One breadth-first search per terminal that never continues through a
/// terminal.
pub fn nonterminal_connectivity_preprocess(graph: &Graph, terminals: &[NodeId]) -> Result<ReachabilityTable> {
    let mut sorted = terminals.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    for &t in &sorted {
        graph.check_node(t)?;
    }
    let n = graph.node_count();
    let mut position = vec![usize::MAX; n];
    for (i, &t) in sorted.iter().enumerate() {
        position[t] = i;
    }
    let k = sorted.len();
    let words = k.div_ceil(64).max(1);
    let mut bits = vec![0u64; k * words];
    let mut seen = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for (i, &t) in sorted.iter().enumerate() {
        seen[t] = i;
        queue.push_back(t);
        while let Some(x) = queue.pop_front() {
            if position[x] != usize::MAX {
                let j = position[x];
                bits[i * words + j / 64] |= 1 << (j % 64);
                if x != t {
                    continue;
                }
            }
            for &(y, _) in graph.neighbors(x) {
                if seen[y] != i {
                    seen[y] = i;
                    queue.push_back(y);
                }
            }
        }
    }
    Ok(ReachabilityTable { terminals: sorted, words, bits })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{blocked_pair, star3};

    #[test]
    fn star3_is_fully_reachable() {
        let inst = star3();
        let table = nonterminal_connectivity_preprocess(&inst.graph, &inst.terminals).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                assert!(table.reachable_at(a, b));
            }
        }
        assert!(table.pairwise(&[0, 1, 2]));
    }

    #[test]
    fn a_terminal_in_the_way_blocks() {
        let inst = blocked_pair();
        let table = nonterminal_connectivity_preprocess(&inst.graph, &inst.terminals).unwrap();
        assert_eq!(table.reachable(0, 2), Some(true));
        assert_eq!(table.reachable(1, 2), Some(true));
        assert_eq!(table.reachable(0, 1), Some(false));
        assert_eq!(table.reachable(1, 0), Some(false));
        assert!(!table.pairwise(&[0, 1, 2]));
        assert_eq!(table.reachable(0, 3), None);
    }

    #[test]
    fn single_terminal() {
        let inst = star3();
        let table = nonterminal_connectivity_preprocess(&inst.graph, &[1]).unwrap();
        assert_eq!(table.terminals(), &[1]);
        assert!(table.pairwise(&[0]));
    }
}
