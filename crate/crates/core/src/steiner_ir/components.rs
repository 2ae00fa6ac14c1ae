use alloc::{format, vec, vec::Vec};

use crate::{
    deadline::Deadline,
    error::{Error, Result},
    exact::{bit, DwCache, DwContext, TerminalMask},
    graph::{Cost, Edge, Graph, NodeId, UnionFind, INFINITE_COST},
};

use super::{
    contraction::{ContractionState, FilteredDistances},
    reach::ReachabilityTable,
};

/// An optimal tree on a terminal subset, with one terminal chosen as sink.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedComponent {
    /// Active terminals in increasing order, sink included.
    pub terminals: Vec<NodeId>,
    pub sink: NodeId,
    pub cost: Cost,
    /// Index into [`ComponentSet::subsets`].
    pub subset: usize,
}

impl DirectedComponent {
    pub fn sources(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.terminals.iter().copied().filter(move |&t| t != self.sink)
    }
}

/// One generated terminal subset and the cost of its tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetTree {
    pub terminals: Vec<NodeId>,
    pub mask: TerminalMask,
    pub cost: Cost,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentSet {
    pub k: usize,
    pub subsets: Vec<SubsetTree>,
    /// Every subset once per possible sink, subsets in generation order.
    pub components: Vec<DirectedComponent>,
}

impl ComponentSet {
    /// `(terminals, sink, cost)` of every component, for comparisons.
    pub fn signature(&self) -> Vec<(Vec<NodeId>, NodeId, Cost)> {
        self.components.iter().map(|c| (c.terminals.clone(), c.sink, c.cost)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CacheMode {
    /// One memo for the whole phase.
    #[default]
    Shared,
    /// A new memo for every subset.
    Fresh,
}

/// Distances of one phase over local nodes: active terminals first, then
/// Steiner nodes.
pub struct Phase {
    nodes: Vec<NodeId>,
    terminals: usize,
    dist: Vec<Cost>,
    /// Original endpoints realizing each local distance.
    via: Vec<(u32, u32)>,
    branch: Vec<bool>,
    reach: Vec<bool>,
    cache: DwCache,
    masks_computed: usize,
}

impl Phase {
    pub fn new(state: &ContractionState, dists: &FilteredDistances, table: &ReachabilityTable) -> Result<Self> {
        let active = state.active();
        let a = active.len();
        if a > TerminalMask::BITS as usize {
            return Err(Error::TooManyTerminals { count: a, limit: TerminalMask::BITS as usize });
        }
        let mut nodes = active.to_vec();
        nodes.extend_from_slice(state.nonterminals());
        let n = nodes.len();
        let mut dist = vec![INFINITE_COST; n * n];
        let mut via = vec![(0u32, 0u32); n * n];
        for i in 0..n {
            for j in i..n {
                let (d, x, y) = if i == j { (0, nodes[i], nodes[i]) } else { state.distance(dists, nodes[i], nodes[j]) };
                dist[i * n + j] = d;
                dist[j * n + i] = d;
                via[i * n + j] = (x as u32, y as u32);
                via[j * n + i] = (y as u32, x as u32);
            }
        }
        let mut reach = vec![false; a * a];
        for i in 0..a {
            for j in 0..a {
                reach[i * a + j] = state.members(active[i]).iter().any(|&x| {
                    state.members(active[j]).iter().any(|&y| table.reachable(x, y).unwrap_or(false))
                });
            }
        }
        let branch = (0..n).map(|i| i >= a).collect();
        Ok(Phase { nodes, terminals: a, dist, via, branch, reach, cache: DwCache::new(), masks_computed: 0 })
    }

    pub fn active(&self) -> &[NodeId] {
        &self.nodes[..self.terminals]
    }

    /// Local distance between two nodes of the phase, by node id.
    pub fn distance(&self, a: NodeId, b: NodeId) -> Option<Cost> {
        let i = self.nodes.iter().position(|&x| x == a)?;
        let j = self.nodes.iter().position(|&x| x == b)?;
        Some(self.dist[i * self.nodes.len() + j])
    }

    /// Dreyfus-Wagner subsets memoized by the shared cache so far.
    pub fn cached_masks(&self) -> usize {
        self.cache.len()
    }

    /// Subsets computed from scratch by fresh-cache generation so far.
    pub fn fresh_masks(&self) -> usize {
        self.masks_computed
    }

    /// All components on `2..=k` active terminals. With `prune`, subsets with
    /// an unreachable pair are skipped without running Dreyfus-Wagner.
    pub fn generate(&mut self, k: usize, mode: CacheMode, prune: bool, deadline: &dyn Deadline) -> Result<ComponentSet> {
        if k < 2 {
            return Err(Error::InvalidParameter(format!("component size {k} is below 2")));
        }
        let a = self.terminals;
        let mut subsets = Vec::new();
        let mut components = Vec::new();
        let mut chosen = Vec::with_capacity(k);
        let mut pending: Vec<Vec<usize>> = Vec::new();
        for size in 2..=k.min(a) {
            combinations(a, size, 0, &mut chosen, &mut |c| pending.push(c.to_vec()));
        }
        let ctx = DwContext::new(&self.dist, a, &self.branch)?.with_deadline(deadline);
        for subset in pending {
            if prune && !subset.iter().enumerate().all(|(x, &i)| subset[x + 1..].iter().all(|&j| self.reach[i * a + j])) {
                continue;
            }
            let mask: TerminalMask = subset.iter().fold(0, |m, &i| m | bit(i));
            let root = subset[0];
            let cost = match mode {
                CacheMode::Shared => self.cache.c(&ctx, root, mask ^ bit(root))?,
                CacheMode::Fresh => {
                    let mut fresh = DwCache::new();
                    let c = fresh.c(&ctx, root, mask ^ bit(root))?;
                    self.masks_computed += fresh.len();
                    c
                }
            };
            if cost == INFINITE_COST {
                continue;
            }
            let terminals: Vec<NodeId> = subset.iter().map(|&i| self.nodes[i]).collect();
            let index = subsets.len();
            for &sink in &terminals {
                components.push(DirectedComponent { terminals: terminals.clone(), sink, cost, subset: index });
            }
            subsets.push(SubsetTree { terminals, mask, cost });
        }

        let mut uf = UnionFind::new(a);
        for s in &subsets {
            let first = s.mask.trailing_zeros() as usize;
            for i in crate::exact::mask_members(s.mask) {
                uf.union(first, i);
            }
        }
        if let Some(i) = (1..a).find(|&i| !uf.same(0, i)) {
            return Err(Error::InfeasibleUnderPruning(format!(
                "no component joins terminal {} to terminal {}",
                self.nodes[i], self.nodes[0]
            )));
        }
        Ok(ComponentSet { k, subsets, components })
    }

    /// Original-graph edges of the tree behind `subset`.
    pub fn subset_tree(&mut self, graph: &Graph, dists: &FilteredDistances, subset: &SubsetTree, deadline: &dyn Deadline) -> Result<Vec<Edge>> {
        let root = subset.mask.trailing_zeros() as usize;
        let rest = subset.mask ^ bit(root);
        let ctx = DwContext::new(&self.dist, self.terminals, &self.branch)?.with_deadline(deadline);
        let pairs = self.cache.tree(&ctx, root, rest)?;
        let n = self.nodes.len();
        let mut edges = Vec::new();
        for (i, j) in pairs {
            let (x, y) = self.via[i * n + j];
            let path = dists
                .path(x as usize, y as usize)
                .ok_or_else(|| Error::InvalidState(format!("no filtered path from {x} to {y}")))?;
            for w in path.windows(2) {
                let weight = graph.weight(w[0], w[1]).ok_or_else(|| Error::InvalidState("broken path".into()))?;
                edges.push(Edge::new(w[0], w[1], weight));
            }
        }
        Ok(edges)
    }
}

fn combinations(n: usize, k: usize, start: usize, chosen: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if chosen.len() == k {
        f(chosen);
        return;
    }
    for i in start..n {
        if n - i < k - chosen.len() {
            break;
        }
        chosen.push(i);
        combinations(n, k, i + 1, chosen, f);
        chosen.pop();
    }
}
