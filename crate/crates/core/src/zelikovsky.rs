//! Zelikovsky's 11/6-approximation with terminal triples.
//!
//! Starting from the MST over the terminal metric, the triple with the
//! largest gain is contracted (its three pairwise distances are set to zero in
//! a working copy of the metric) and its center is remembered. When no triple
//! has positive gain, the answer is the MST over the terminals and the
//! remembered centers in the original metric.

use alloc::{format, vec, vec::Vec};

use crate::{
    deadline::{Deadline, Unlimited},
    error::{Error, Result},
    exact::expand_pairs,
    graph::{assemble_tree, kruskal, metric_closure, mst, Cost, Edge, Metric, NodeId, TreeEdges, INFINITE_COST},
    instance::{SteinerInstance, SteinerTree},
    local_search::{hill_climb_limited, SearchComponents, SearchStrategy, StopReason},
};

/// Maximum edge weight on the tree path between each pair of terminals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaveMatrix {
    terminals: Vec<NodeId>,
    values: Vec<Cost>,
}

impl SaveMatrix {
    pub fn terminals(&self) -> &[NodeId] {
        &self.terminals
    }

    /// Entry by terminal positions.
    pub fn at(&self, i: usize, j: usize) -> Cost {
        self.values[i * self.terminals.len() + j]
    }

    /// Entry by node ids; `None` if either is not one of the terminals.
    pub fn get(&self, a: NodeId, b: NodeId) -> Option<Cost> {
        let i = self.terminals.binary_search(&a).ok()?;
        let j = self.terminals.binary_search(&b).ok()?;
        Some(self.at(i, j))
    }
}

/// Builds the save matrix of a spanning tree over `terminals` by repeatedly
/// removing the heaviest edge and assigning its weight to every pair it
/// separates.
pub fn compute_save(terminals: &[NodeId], tree: &TreeEdges) -> Result<SaveMatrix> {
    let mut sorted = terminals.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let index = |v: NodeId| {
        sorted.binary_search(&v).map_err(|_| Error::NotATree(format!("edge endpoint {v} is not a terminal")))
    };
    let mut local = Vec::with_capacity(tree.edges.len());
    for e in &tree.edges {
        local.push((index(e.u)?, index(e.v)?, e.weight));
    }
    let values = save_of_local_tree(sorted.len(), &local)?;
    Ok(SaveMatrix { terminals: sorted, values })
}

fn save_of_local_tree(k: usize, edges: &[(usize, usize, Cost)]) -> Result<Vec<Cost>> {
    let as_edges: Vec<Edge> = edges.iter().map(|&(a, b, w)| Edge::new(a, b, w)).collect();
    crate::graph::check_tree(k, &as_edges)?;
    if k > 0 && as_edges.len() + 1 != k {
        return Err(Error::NotATree(format!("{} edges cannot span {} terminals", as_edges.len(), k)));
    }
    let mut values = vec![0; k * k];
    split(k, (0..k).collect(), edges.to_vec(), &mut values);
    Ok(values)
}

fn split(k: usize, nodes: Vec<usize>, mut edges: Vec<(usize, usize, Cost)>, values: &mut [Cost]) {
    if nodes.len() < 2 {
        return;
    }
    let heaviest = (0..edges.len()).max_by_key(|&i| (edges[i].2, core::cmp::Reverse(i))).unwrap_or(0);
    let (a, _, w) = edges.swap_remove(heaviest);

    // Side of `a` once the heaviest edge is gone.
    let mut side = vec![false; k];
    side[a] = true;
    let mut stack = vec![a];
    while let Some(x) = stack.pop() {
        for &(p, q, _) in &edges {
            let y = if p == x { q } else if q == x { p } else { continue };
            if !side[y] {
                side[y] = true;
                stack.push(y);
            }
        }
    }
    let (left, right): (Vec<usize>, Vec<usize>) = nodes.into_iter().partition(|&v| side[v]);
    for &x in &left {
        for &y in &right {
            values[x * k + y] = w;
            values[y * k + x] = w;
        }
    }
    let (left_edges, right_edges) = edges.into_iter().partition(|e| side[e.0]);
    split(k, left, left_edges, values);
    split(k, right, right_edges, values);
}

/// Three terminals and the node minimizing the summed distance to them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Triple {
    pub terminals: [NodeId; 3],
    pub center: NodeId,
    pub cost: Cost,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CenterRule {
    /// Any node may be a center, terminals included.
    #[default]
    AllNodes,
    NonTerminalsOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GainRule {
    /// Largest plus smallest of the three pair saves, minus the triple cost.
    #[default]
    MaxPlusMin,
    /// Two largest pair saves minus the triple cost.
    TwoLargest,
}

/// One triple per 3-subset of `terminals` in lexicographic order, with the
/// lowest-id center among the minimizers.
pub fn find_triples(metric: &Metric, terminals: &[NodeId], centers: CenterRule) -> Vec<Triple> {
    let mut sorted = terminals.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut is_terminal = vec![false; metric.len()];
    for &t in &sorted {
        is_terminal[t] = true;
    }
    let candidates: Vec<NodeId> = (0..metric.len())
        .filter(|&v| centers == CenterRule::AllNodes || !is_terminal[v])
        .collect();
    let k = sorted.len();
    let mut out = Vec::new();
    for i in 0..k {
        let ra = metric.row(sorted[i]);
        for j in i + 1..k {
            let rb = metric.row(sorted[j]);
            for l in j + 1..k {
                let rc = metric.row(sorted[l]);
                let mut best = (INFINITE_COST, NodeId::MAX);
                for &v in &candidates {
                    let c = ra[v].saturating_add(rb[v]).saturating_add(rc[v]);
                    if c < best.0 {
                        best = (c, v);
                    }
                }
                if best.1 != NodeId::MAX && best.0 != INFINITE_COST {
                    out.push(Triple { terminals: [sorted[i], sorted[j], sorted[l]], center: best.1, cost: best.0 });
                }
            }
        }
    }
    out
}

/// Gain of contracting `triple` under the current save matrix.
pub fn triple_gain(triple: &Triple, save: &SaveMatrix, rule: GainRule) -> Result<i64> {
    let [a, b, c] = triple.terminals;
    let lookup = |x, y| save.get(x, y).ok_or(Error::InvalidState(format!("pair ({x}, {y}) has no save entry")));
    let mut s = [lookup(a, b)?, lookup(b, c)?, lookup(a, c)?];
    s.sort_unstable();
    Ok(triple_gain_of(s, triple.cost, rule))
}

fn triple_gain_of(sorted_saves: [Cost; 3], cost: Cost, rule: GainRule) -> i64 {
    let [lo, mid, hi] = sorted_saves;
    let keep = match rule {
        GainRule::MaxPlusMin => hi + lo,
        GainRule::TwoLargest => hi + mid,
    };
    keep as i64 - cost as i64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ZelikovskyOptions {
    pub gain: GainRule,
    pub centers: CenterRule,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZelikovskyOutcome {
    pub tree: SteinerTree,
    /// Contracted triples in order of acceptance.
    pub accepted: Vec<Triple>,
    /// Non-terminal centers added to the final spanning tree.
    pub selected: Vec<NodeId>,
}

/// Search state: the working terminal metric, its MST's save matrix and the
/// centers picked so far.
struct ZelState {
    work: Vec<Cost>,
    save: Vec<Cost>,
    accepted: Vec<usize>,
}

struct ZelSearch<'a> {
    k: usize,
    triples: &'a [Triple],
    /// Terminal positions of each triple.
    local: Vec<[usize; 3]>,
    rule: GainRule,
}

impl ZelSearch<'_> {
    fn save_of(&self, work: &[Cost]) -> Result<Vec<Cost>> {
        let k = self.k;
        let mut edges = Vec::with_capacity(k * (k - 1) / 2);
        for i in 0..k {
            for j in i + 1..k {
                edges.push(Edge::new(i, j, work[i * k + j]));
            }
        }
        let tree: Vec<(usize, usize, Cost)> = kruskal(k, edges).into_iter().map(|e| (e.u, e.v, e.weight)).collect();
        save_of_local_tree(k, &tree)
    }
}

impl SearchComponents for ZelSearch<'_> {
    type State = ZelState;
    type Move = usize;

    fn neighbourhood(&self, _: &ZelState) -> Vec<usize> {
        (0..self.triples.len()).collect()
    }

    fn gain(&self, state: &ZelState, &t: &usize) -> i64 {
        let [a, b, c] = self.local[t];
        let k = self.k;
        let mut s = [state.save[a * k + b], state.save[b * k + c], state.save[a * k + c]];
        s.sort_unstable();
        triple_gain_of(s, self.triples[t].cost, self.rule)
    }

    fn commit(&self, mut state: ZelState, t: usize) -> Result<ZelState> {
        let [a, b, c] = self.local[t];
        let k = self.k;
        for (x, y) in [(a, b), (b, c), (a, c)] {
            state.work[x * k + y] = 0;
            state.work[y * k + x] = 0;
        }
        state.save = self.save_of(&state.work)?;
        state.accepted.push(t);
        Ok(state)
    }
}

pub fn zelikovsky(instance: &SteinerInstance) -> Result<SteinerTree> {
    Ok(zelikovsky_with(instance, ZelikovskyOptions::default(), &Unlimited)?.tree)
}

pub fn zelikovsky_with(
    instance: &SteinerInstance,
    options: ZelikovskyOptions,
    deadline: &dyn Deadline,
) -> Result<ZelikovskyOutcome> {
    let terminals = &instance.terminals;
    if terminals.is_empty() {
        return Err(Error::EmptyTerminals);
    }
    let metric = metric_closure(&instance.graph)?;
    let triples = find_triples(&metric, terminals, options.centers);
    let k = terminals.len();
    let local = triples
        .iter()
        .map(|t| t.terminals.map(|v| terminals.binary_search(&v).expect("triple over instance terminals")))
        .collect();
    let search = ZelSearch { k, triples: &triples, local, rule: options.gain };

    let mut work = vec![0; k * k];
    for i in 0..k {
        for j in 0..k {
            work[i * k + j] = metric.dist(terminals[i], terminals[j]);
        }
    }
    let save = search.save_of(&work)?;
    let start = ZelState { work, save, accepted: Vec::new() };
    let climb = hill_climb_limited(start, &search, SearchStrategy::ChooseBest, None, deadline)?;
    if climb.stop == StopReason::DeadlineExceeded {
        return Err(Error::DeadlineExceeded);
    }
    log::debug!("zelikovsky accepted {} triples on {}", climb.steps, instance.name);

    let accepted: Vec<Triple> = climb.state.accepted.iter().map(|&t| triples[t]).collect();
    let mut selected: Vec<NodeId> =
        accepted.iter().map(|t| t.center).filter(|c| terminals.binary_search(c).is_err()).collect();
    selected.sort_unstable();
    selected.dedup();

    if k == 1 {
        return Ok(ZelikovskyOutcome { tree: SteinerTree::empty(), accepted, selected });
    }
    let mut nodes = terminals.clone();
    nodes.extend_from_slice(&selected);
    let spanning = mst(&metric, &nodes)?;
    let pairs: Vec<(NodeId, NodeId)> = spanning.edges.iter().map(|e| (e.u, e.v)).collect();
    let edges = expand_pairs(&metric, &pairs)?;
    let tree = assemble_tree(instance.graph.node_count(), edges, terminals)?;
    Ok(ZelikovskyOutcome { tree, accepted, selected })
}
