//! Multistart local search: shortest path heuristic trees improved by
//! Steiner node insertion, key path exchange and key vertex elimination.
//!
//! All three neighbourhoods are evaluated naively. Each family proposes its
//! best move; the first family with a positive gain is applied.

use alloc::{vec, vec::Vec};
use core::cell::RefCell;

use rand::{seq::SliceRandom, Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{
    deadline::{Deadline, Unlimited},
    error::{Error, Result},
    graph::{
        dijkstra_filtered, kruskal, mst, multi_source_dijkstra, prune_leaves, Cost, Edge, Graph, NodeId,
        ShortestPathForest, UnionFind, INFINITE_COST,
    },
    instance::{SteinerInstance, SteinerTree},
    local_search::{hill_climb_limited, SearchComponents, SearchStrategy, StopReason},
};

/// A Steiner tree under local search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LsTree {
    pub edges: Vec<Edge>,
    pub cost: Cost,
    /// Tree nodes in increasing order.
    pub nodes: Vec<NodeId>,
}

/// Maximal tree path between two crucial nodes with no crucial node inside.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyPath {
    /// From one crucial end to the other.
    pub nodes: Vec<NodeId>,
    pub edges: Vec<Edge>,
    pub cost: Cost,
}

impl LsTree {
    /// Tree from `edges` after removing non-terminal leaves. A lone terminal
    /// is kept as a single node.
    pub fn from_edges(node_count: usize, edges: Vec<Edge>, is_terminal: &[bool]) -> Self {
        let edges = prune_leaves(node_count, edges, is_terminal);
        let tree = SteinerTree::from_edges(edges);
        let mut nodes = tree.nodes();
        if nodes.is_empty() {
            nodes.extend(is_terminal.iter().position(|&t| t));
        }
        LsTree { edges: tree.edges, cost: tree.cost, nodes }
    }

    pub fn into_tree(self) -> SteinerTree {
        SteinerTree { edges: self.edges, cost: self.cost }
    }

    fn degrees(&self, node_count: usize) -> Vec<usize> {
        let mut deg = vec![0; node_count];
        for e in &self.edges {
            deg[e.u] += 1;
            deg[e.v] += 1;
        }
        deg
    }

    /// Non-terminal tree nodes of degree at least three.
    pub fn key_nodes(&self, is_terminal: &[bool]) -> Vec<NodeId> {
        let deg = self.degrees(is_terminal.len());
        self.nodes.iter().copied().filter(|&v| !is_terminal[v] && deg[v] >= 3).collect()
    }

    pub fn key_paths(&self, is_terminal: &[bool]) -> Vec<KeyPath> {
        let n = is_terminal.len();
        let deg = self.degrees(n);
        let crucial = |v: NodeId| is_terminal[v] || deg[v] != 2;
        let mut adj: Vec<Vec<(NodeId, usize)>> = vec![Vec::new(); n];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.u].push((e.v, i));
            adj[e.v].push((e.u, i));
        }
        let mut used = vec![false; self.edges.len()];
        let mut out = Vec::new();
        for &start in self.nodes.iter().filter(|&&v| crucial(v)) {
            for &(first, ei) in &adj[start] {
                if used[ei] {
                    continue;
                }
                used[ei] = true;
                let mut nodes = vec![start, first];
                let mut edges = vec![self.edges[ei]];
                let mut cur = first;
                while !crucial(cur) {
                    let &(next, nj) = adj[cur].iter().find(|&&(_, j)| !used[j]).expect("degree two");
                    used[nj] = true;
                    edges.push(self.edges[nj]);
                    nodes.push(next);
                    cur = next;
                }
                let cost = edges.iter().map(|e| e.weight).sum();
                out.push(KeyPath { nodes, edges, cost });
            }
        }
        out
    }
}

/// Shortest path rows computed on first use.
struct LazyMetric<'g> {
    graph: &'g Graph,
    rows: RefCell<Vec<Option<ShortestPathForest>>>,
}

impl<'g> LazyMetric<'g> {
    fn new(graph: &'g Graph) -> Self {
        LazyMetric { graph, rows: RefCell::new(vec![None; graph.node_count()]) }
    }

    fn with_row<T>(&self, s: NodeId, f: impl FnOnce(&ShortestPathForest) -> T) -> T {
        let mut rows = self.rows.borrow_mut();
        let row = rows[s].get_or_insert_with(|| dijkstra_filtered(self.graph, &[s], |_| true));
        f(row)
    }

    fn dist(&self, a: NodeId, b: NodeId) -> Cost {
        self.with_row(a, |r| r.dist[b])
    }

    fn path_edges(&self, a: NodeId, b: NodeId) -> Result<Vec<Edge>> {
        let path = self.with_row(a, |r| r.path_from_source(b)).ok_or(Error::Disconnected(a, b))?;
        Ok(path_edges(self.graph, &path))
    }

    /// MST of the metric restricted to `nodes`.
    fn mst(&self, nodes: &[NodeId]) -> Vec<Edge> {
        let mut edges = Vec::with_capacity(nodes.len() * nodes.len() / 2);
        for (i, &a) in nodes.iter().enumerate() {
            for &b in &nodes[i + 1..] {
                let d = self.dist(a, b);
                if d != INFINITE_COST {
                    edges.push(Edge::new(a, b, d));
                }
            }
        }
        kruskal(self.graph.node_count(), edges)
    }
}

fn path_edges(graph: &Graph, path: &[NodeId]) -> Vec<Edge> {
    path.windows(2)
        .map(|w| Edge::new(w[0], w[1], graph.weight(w[0], w[1]).expect("path follows graph edges")))
        .collect()
}

/// Grows a tree from `start` by attaching the closest remaining terminal
/// along a shortest path until every terminal is in, then strips
/// non-terminal leaves.
pub fn sph(instance: &SteinerInstance, start: NodeId) -> Result<LsTree> {
    let graph = &instance.graph;
    graph.check_node(start)?;
    let is_terminal = instance.is_terminal_mask();
    let mut in_tree = vec![false; graph.node_count()];
    in_tree[start] = true;
    let mut tree_nodes = vec![start];
    let mut edges = Vec::new();
    let mut remaining: Vec<NodeId> = instance.terminals.iter().copied().filter(|&t| t != start).collect();
    while !remaining.is_empty() {
        let forest = multi_source_dijkstra(graph, &tree_nodes)?;
        let (i, &t) = remaining
            .iter()
            .enumerate()
            .min_by_key(|&(_, &t)| (forest.dist[t], t))
            .expect("non-empty");
        if forest.dist[t] == INFINITE_COST {
            return Err(Error::Disconnected(start, t));
        }
        let path = forest.path_from_source(t).expect("reachable");
        edges.extend(path_edges(graph, &path));
        for &v in &path {
            if !in_tree[v] {
                in_tree[v] = true;
                tree_nodes.push(v);
            }
        }
        remaining.swap_remove(i);
        remaining.retain(|&r| !in_tree[r]);
    }
    Ok(LsTree::from_edges(graph.node_count(), edges, &is_terminal))
}

/// The three move families, in the order they are tried.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveFamily {
    InsertSteiner,
    KeyPathExchange,
    KeyVertexElimination,
}

/// Best move of one family: its gain and the tree it leads to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub gain: i64,
    pub tree: LsTree,
}

/// Move evaluation against one instance.
pub struct Neighbourhoods<'a> {
    instance: &'a SteinerInstance,
    is_terminal: Vec<bool>,
    metric: LazyMetric<'a>,
}

impl<'a> Neighbourhoods<'a> {
    pub fn new(instance: &'a SteinerInstance) -> Self {
        Neighbourhoods { instance, is_terminal: instance.is_terminal_mask(), metric: LazyMetric::new(&instance.graph) }
    }

    fn n(&self) -> usize {
        self.instance.graph.node_count()
    }

    fn build(&self, edges: Vec<Edge>) -> LsTree {
        LsTree::from_edges(self.n(), edges, &self.is_terminal)
    }

    pub fn best(&self, family: MoveFamily, tree: &LsTree) -> Option<Candidate> {
        match family {
            MoveFamily::InsertSteiner => self.insert_steiner(tree),
            MoveFamily::KeyPathExchange => self.key_path_exchange(tree),
            MoveFamily::KeyVertexElimination => self.key_vertex_elimination(tree),
        }
    }

    /// Node outside the tree whose addition gives the cheapest MST of the
    /// induced subgraph.
    pub fn insert_steiner(&self, tree: &LsTree) -> Option<Candidate> {
        let graph = &self.instance.graph;
        let mut in_tree = vec![false; self.n()];
        for &v in &tree.nodes {
            in_tree[v] = true;
        }
        let mut best: Option<Candidate> = None;
        let mut nodes = tree.nodes.clone();
        for v in 0..self.n() {
            if in_tree[v] || !graph.neighbors(v).iter().any(|&(u, _)| in_tree[u]) {
                continue;
            }
            nodes.push(v);
            if let Ok(span) = mst(graph, &nodes) {
                let gain = tree.cost as i64 - span.cost as i64;
                if gain > 0 && best.as_ref().is_none_or(|b| gain > b.gain) {
                    best = Some(Candidate { gain, tree: self.build(span.edges) });
                }
            }
            nodes.pop();
        }
        best
    }

    /// Key path whose replacement by the shortest reconnecting path saves
    /// the most.
    pub fn key_path_exchange(&self, tree: &LsTree) -> Option<Candidate> {
        let graph = &self.instance.graph;
        let n = self.n();
        let mut best: Option<Candidate> = None;
        for path in tree.key_paths(&self.is_terminal) {
            let mut keep: Vec<Edge> = tree.edges.iter().copied().filter(|e| !path.edges.contains(e)).collect();
            let mut uf = UnionFind::new(n);
            for e in &keep {
                uf.union(e.u, e.v);
            }
            let (a, b) = (path.nodes[0], path.nodes[path.nodes.len() - 1]);
            let interior = &path.nodes[1..path.nodes.len() - 1];
            let side_a: Vec<NodeId> =
                tree.nodes.iter().copied().filter(|&v| uf.same(v, a) && !interior.contains(&v)).collect();
            let mut in_b = vec![false; n];
            for &v in &tree.nodes {
                in_b[v] = uf.same(v, b) && !interior.contains(&v);
            }
            let forest = dijkstra_filtered(graph, &side_a, |v| !in_b[v]);
            let Some(target) = (0..n).filter(|&v| in_b[v]).min_by_key(|&v| (forest.dist[v], v)) else { continue };
            let dist = forest.dist[target];
            if dist == INFINITE_COST {
                continue;
            }
            let gain = path.cost as i64 - dist as i64;
            if gain > 0 && best.as_ref().is_none_or(|c| gain > c.gain) {
                let new_path = forest.path_from_source(target).expect("reachable");
                keep.extend(path_edges(graph, &new_path));
                best = Some(Candidate { gain, tree: self.build(keep) });
            }
        }
        best
    }

    /// Key node whose removal from the crucial set lowers the metric MST the
    /// most.
    pub fn key_vertex_elimination(&self, tree: &LsTree) -> Option<Candidate> {
        let keys = tree.key_nodes(&self.is_terminal);
        if keys.is_empty() {
            return None;
        }
        let mut crucial: Vec<NodeId> = self.instance.terminals.clone();
        crucial.extend_from_slice(&keys);
        crucial.sort_unstable();
        let base: Cost = self.metric.mst(&crucial).iter().map(|e| e.weight).sum();
        let mut best: Option<(i64, Vec<Edge>)> = None;
        for &v in &keys {
            let rest: Vec<NodeId> = crucial.iter().copied().filter(|&u| u != v).collect();
            let span = self.metric.mst(&rest);
            if span.len() + 1 != rest.len() {
                continue;
            }
            let gain = base as i64 - span.iter().map(|e| e.weight as i64).sum::<i64>();
            if gain > 0 && best.as_ref().is_none_or(|b| gain > b.0) {
                best = Some((gain, span));
            }
        }
        let (gain, span) = best?;
        let mut edges = Vec::new();
        for e in &span {
            edges.extend(self.metric.path_edges(e.u, e.v).ok()?);
        }
        let assembled = crate::graph::assemble_tree(self.n(), edges, &self.instance.terminals).ok()?;
        Some(Candidate { gain, tree: self.build(assembled.edges) })
    }
}

/// Candidate computed by the last `gain` call, keyed by family and tree.
type Memo = Option<(MoveFamily, Vec<Edge>, Option<Candidate>)>;

struct MsSearch<'a> {
    moves: Neighbourhoods<'a>,
    memo: RefCell<Memo>,
    /// Cost after every commit.
    costs: RefCell<Vec<Cost>>,
}

impl MsSearch<'_> {
    fn candidate(&self, state: &LsTree, family: MoveFamily) -> Option<Candidate> {
        if let Some((f, edges, c)) = &*self.memo.borrow() {
            if *f == family && *edges == state.edges {
                return c.clone();
            }
        }
        let c = self.moves.best(family, state);
        *self.memo.borrow_mut() = Some((family, state.edges.clone(), c.clone()));
        c
    }
}

impl SearchComponents for MsSearch<'_> {
    type State = LsTree;
    type Move = MoveFamily;

    fn neighbourhood(&self, _: &LsTree) -> Vec<MoveFamily> {
        vec![MoveFamily::InsertSteiner, MoveFamily::KeyPathExchange, MoveFamily::KeyVertexElimination]
    }

    fn gain(&self, state: &LsTree, family: &MoveFamily) -> i64 {
        self.candidate(state, *family).map_or(0, |c| c.gain)
    }

    fn commit(&self, state: LsTree, family: MoveFamily) -> Result<LsTree> {
        let next = self
            .candidate(&state, family)
            .ok_or_else(|| Error::InvalidState("committed a move without a candidate".into()))?
            .tree;
        if next.cost >= state.cost {
            return Err(Error::InvalidState("local search move did not lower the cost".into()));
        }
        self.costs.borrow_mut().push(next.cost);
        Ok(next)
    }
}

/// Improves `tree` until no move family finds an improving move. Returns
/// the final tree and the cost after every applied move.
pub fn local_search(instance: &SteinerInstance, tree: LsTree, deadline: &dyn Deadline) -> Result<(LsTree, Vec<Cost>)> {
    let search = MsSearch { moves: Neighbourhoods::new(instance), memo: RefCell::new(None), costs: RefCell::new(Vec::new()) };
    let climb = hill_climb_limited(tree, &search, SearchStrategy::ChooseFirst, None, deadline)?;
    if climb.stop == StopReason::DeadlineExceeded {
        return Err(Error::DeadlineExceeded);
    }
    Ok((climb.state, search.costs.into_inner()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestartReport {
    pub start: NodeId,
    pub sph_cost: Cost,
    pub final_cost: Cost,
    /// Cost decrease of every applied move.
    pub gains: Vec<Cost>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultistartOutcome {
    pub tree: SteinerTree,
    pub restarts: Vec<RestartReport>,
}

pub const DEFAULT_RESTARTS: usize = 100;

/// Start nodes: a shuffled pass over all nodes, then uniform draws.
pub fn start_nodes<R: Rng + ?Sized>(node_count: usize, restarts: usize, rng: &mut R) -> Vec<NodeId> {
    let mut order: Vec<NodeId> = (0..node_count).collect();
    order.shuffle(rng);
    order.truncate(restarts);
    while order.len() < restarts {
        order.push(rng.random_range(0..node_count));
    }
    order
}

pub fn multistart(instance: &SteinerInstance, restarts: usize, seed: u64) -> Result<SteinerTree> {
    Ok(multistart_with(instance, restarts, seed, &Unlimited)?.tree)
}

pub fn multistart_with(
    instance: &SteinerInstance,
    restarts: usize,
    seed: u64,
    deadline: &dyn Deadline,
) -> Result<MultistartOutcome> {
    if restarts == 0 {
        return Err(Error::InvalidParameter("at least one restart is needed".into()));
    }
    if instance.terminals.is_empty() {
        return Err(Error::EmptyTerminals);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let starts = start_nodes(instance.graph.node_count(), restarts, &mut rng);
    let mut best: Option<LsTree> = None;
    let mut reports = Vec::with_capacity(restarts);
    for start in starts {
        deadline.check()?;
        let seed_tree = sph(instance, start)?;
        let sph_cost = seed_tree.cost;
        let (tree, costs) = local_search(instance, seed_tree, deadline)?;
        let mut previous = sph_cost;
        let gains = costs
            .iter()
            .map(|&c| {
                let g = previous - c;
                previous = c;
                g
            })
            .collect();
        reports.push(RestartReport { start, sph_cost, final_cost: tree.cost, gains });
        if best.as_ref().is_none_or(|b| tree.cost < b.cost) {
            best = Some(tree);
        }
    }
    let tree = best.expect("at least one restart").into_tree();
    Ok(MultistartOutcome { tree, restarts: reports })
}
