//! Dreyfus-Wagner dynamic programming over terminal subsets.
//!
//! States are `(v, X)` with `X` a bitmask over a fixed terminal ordering. The
//! memo stores, per mask, the `B` and `C` values of every node at once, so a
//! state computed for one terminal subset is reused by every later query
//! whose subsets contain it.
//!
//! - `C(v, X)`: cheapest tree spanning `X ∪ {v}`.
//! - `B(v, X)`: cheapest such tree in which `v` has degree at least two,
//!   `min over ∅ ⊂ Y ⊂ X of C(v, Y) + C(v, X \ Y)`.
//! - `C(v, {u}) = d(v, u)`, and for larger `X`
//!   `C(v, X) = min(min_{u ∈ X} C(u, X \ {u}) + d(u, v), min_{u ∉ X} B(u, X) + d(u, v))`
//!   where the second minimum includes `u = v`.

use alloc::{format, vec, vec::Vec};

use hashbrown::HashMap;

use crate::{
    deadline::{Deadline, Unlimited},
    error::{Error, Result},
    graph::{assemble_tree, Cost, Edge, Metric, NodeId, INFINITE_COST},
    instance::{SteinerInstance, SteinerTree},
};

/// Terminal subset as a bitmask over the local terminal ordering.
pub type TerminalMask = u128;

/// Widest terminal set [`solve_exact`] accepts.
pub const MAX_EXACT_TERMINALS: usize = 30;

const VIA_BRANCH: u32 = 1 << 31;

#[inline]
pub(crate) fn bit(i: usize) -> TerminalMask {
    1 << i
}

pub(crate) fn mask_members(mut mask: TerminalMask) -> impl Iterator<Item = usize> {
    core::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

/// Distances and node roles of one Dreyfus-Wagner problem, over local node
/// indices `0..n`. Local nodes `0..terminals` are the terminal ordering the
/// masks refer to.
#[derive(Clone, Copy)]
pub struct DwContext<'a> {
    n: usize,
    dist: &'a [Cost],
    terminals: usize,
    branch: &'a [bool],
    self_branch: bool,
    deadline: &'a dyn Deadline,
}

impl<'a> DwContext<'a> {
    /// `dist` is a row-major `n × n` matrix; `branch[u]` allows `u` to be a
    /// degree-three junction of a tree it is not the root of.
    pub fn new(dist: &'a [Cost], terminals: usize, branch: &'a [bool]) -> Result<Self> {
        let n = branch.len();
        if dist.len() != n * n {
            return Err(Error::InvalidParameter(format!("distance matrix is not {n} x {n}")));
        }
        if terminals > n || terminals > TerminalMask::BITS as usize {
            return Err(Error::InvalidParameter(format!("{terminals} terminals over {n} nodes")));
        }
        Ok(DwContext { n, dist, terminals, branch, self_branch: true, deadline: &Unlimited })
    }

    /// Drops `u = v` from the junction minimum of `C(v, X)`. Only useful to
    /// show that the option is needed.
    pub fn without_self_branch(mut self) -> Self {
        self.self_branch = false;
        self
    }

    pub fn with_deadline(mut self, deadline: &'a dyn Deadline) -> Self {
        self.deadline = deadline;
        self
    }

    #[inline]
    fn d(&self, u: usize, v: usize) -> Cost {
        self.dist[u * self.n + v]
    }

    fn check_mask(&self, mask: TerminalMask) -> Result<()> {
        if mask == 0 {
            return Err(Error::InvalidState("empty terminal subset".into()));
        }
        if self.terminals < TerminalMask::BITS as usize && mask >> self.terminals != 0 {
            return Err(Error::InvalidState(format!("subset {mask:#b} names a non-terminal")));
        }
        Ok(())
    }
}

struct MaskEntry {
    b: Vec<Cost>,
    b_split: Vec<TerminalMask>,
    c: Vec<Cost>,
    c_via: Vec<u32>,
}

/// Memo of Dreyfus-Wagner states. Valid for one distance matrix and one
/// terminal ordering; entries are only ever added.
#[derive(Default)]
pub struct DwCache {
    node_count: Option<usize>,
    entries: HashMap<TerminalMask, MaskEntry>,
}

impl DwCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of memoized subsets.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn clear(&mut self) {
        self.entries.clear();
        self.node_count = None;
    }

    /// `B(v, X)`; needs `|X| ≥ 2` and `v ∉ X`.
    pub fn b(&mut self, ctx: &DwContext<'_>, v: usize, mask: TerminalMask) -> Result<Cost> {
        self.check_state(ctx, v, mask)?;
        if mask.count_ones() < 2 {
            return Err(Error::InvalidState("B needs at least two terminals to split".into()));
        }
        self.ensure(ctx, mask)?;
        Ok(self.entries[&mask].b[v])
    }

    /// `C(v, X)`; needs `X` non-empty and `v ∉ X`.
    pub fn c(&mut self, ctx: &DwContext<'_>, v: usize, mask: TerminalMask) -> Result<Cost> {
        self.check_state(ctx, v, mask)?;
        self.ensure(ctx, mask)?;
        Ok(self.entries[&mask].c[v])
    }

    /// Distance-matrix edges of an optimal tree for `C(v, X)`, in local ids.
    /// A pair may repeat when two branches share a node.
    pub fn tree(&mut self, ctx: &DwContext<'_>, v: usize, mask: TerminalMask) -> Result<Vec<(usize, usize)>> {
        if self.c(ctx, v, mask)? == INFINITE_COST {
            return Err(Error::InvalidState("no tree connects this subset".into()));
        }
        let mut out = Vec::new();
        self.collect_c(v, mask, &mut out);
        Ok(out)
    }

    fn check_state(&mut self, ctx: &DwContext<'_>, v: usize, mask: TerminalMask) -> Result<()> {
        match self.node_count {
            Some(n) if n != ctx.n => {
                return Err(Error::InvalidParameter("cache belongs to a different node set".into()))
            }
            _ => self.node_count = Some(ctx.n),
        }
        ctx.check_mask(mask)?;
        if v >= ctx.n {
            return Err(Error::NodeOutOfRange(v));
        }
        if v < ctx.terminals && mask & bit(v) != 0 {
            return Err(Error::InvalidState(format!("node {v} is inside the subset")));
        }
        Ok(())
    }

    fn ensure(&mut self, ctx: &DwContext<'_>, mask: TerminalMask) -> Result<()> {
        if self.entries.contains_key(&mask) {
            return Ok(());
        }
        if mask.count_ones() >= 2 {
            // Every proper subset lies inside some X \ {u}.
            for u in mask_members(mask) {
                self.ensure(ctx, mask ^ bit(u))?;
            }
        }
        ctx.deadline.check()?;
        let entry = self.compute(ctx, mask);
        self.entries.insert(mask, entry);
        Ok(())
    }

    fn compute(&self, ctx: &DwContext<'_>, mask: TerminalMask) -> MaskEntry {
        let n = ctx.n;
        if mask.count_ones() == 1 {
            let u = mask.trailing_zeros() as usize;
            let mut c: Vec<Cost> = (0..n).map(|v| ctx.d(v, u)).collect();
            c[u] = INFINITE_COST;
            return MaskEntry { b: Vec::new(), b_split: Vec::new(), c, c_via: vec![u as u32; n] };
        }

        let mut b = vec![INFINITE_COST; n];
        let mut b_split = vec![0; n];
        let low = mask & mask.wrapping_neg();
        let rest = mask ^ low;
        let mut sub = rest;
        loop {
            sub = sub.wrapping_sub(1) & rest;
            let y = low | sub;
            let cy = &self.entries[&y].c;
            let cz = &self.entries[&(mask ^ y)].c;
            for v in 0..n {
                let s = cy[v].saturating_add(cz[v]);
                if s < b[v] {
                    b[v] = s;
                    b_split[v] = y;
                }
            }
            if sub == 0 {
                break;
            }
        }

        let mut c = vec![INFINITE_COST; n];
        let mut c_via = vec![0u32; n];
        for u in mask_members(mask) {
            let cu = self.entries[&(mask ^ bit(u))].c[u];
            if cu == INFINITE_COST {
                continue;
            }
            let row = &ctx.dist[u * n..(u + 1) * n];
            for v in 0..n {
                let val = cu.saturating_add(row[v]);
                if val < c[v] {
                    c[v] = val;
                    c_via[v] = u as u32;
                }
            }
        }
        let in_mask = |u: usize| u < ctx.terminals && mask & bit(u) != 0;
        for u in 0..n {
            if !ctx.branch[u] || in_mask(u) || b[u] == INFINITE_COST {
                continue;
            }
            let bu = b[u];
            let row = &ctx.dist[u * n..(u + 1) * n];
            for v in 0..n {
                let val = bu.saturating_add(row[v]);
                if val < c[v] && (ctx.self_branch || v != u) {
                    c[v] = val;
                    c_via[v] = u as u32 | VIA_BRANCH;
                }
            }
        }
        for v in 0..n {
            if in_mask(v) {
                c[v] = INFINITE_COST;
            } else if ctx.self_branch && b[v] < c[v] {
                c[v] = b[v];
                c_via[v] = v as u32 | VIA_BRANCH;
            }
        }
        MaskEntry { b, b_split, c, c_via }
    }

    fn collect_c(&self, v: usize, mask: TerminalMask, out: &mut Vec<(usize, usize)>) {
        let via = self.entries[&mask].c_via[v];
        let u = (via & !VIA_BRANCH) as usize;
        if u != v {
            out.push((v, u));
        }
        if via & VIA_BRANCH != 0 {
            self.collect_b(u, mask, out);
        } else if mask != bit(u) {
            self.collect_c(u, mask ^ bit(u), out);
        }
    }

    fn collect_b(&self, v: usize, mask: TerminalMask, out: &mut Vec<(usize, usize)>) {
        let y = self.entries[&mask].b_split[v];
        self.collect_c(v, y, out);
        self.collect_c(v, mask ^ y, out);
    }
}

/// Dreyfus-Wagner over a metric closure with original node ids. Local order
/// is the given terminals followed by every other node; any node not in the
/// current subset may act as a junction.
pub struct DwSolver {
    local_to_node: Vec<NodeId>,
    node_to_local: Vec<usize>,
    data: DwData,
    cache: DwCache,
}

struct DwData {
    dist: Vec<Cost>,
    branch: Vec<bool>,
    terminals: usize,
}

impl DwData {
    fn context(&self) -> DwContext<'_> {
        DwContext {
            n: self.branch.len(),
            dist: &self.dist,
            terminals: self.terminals,
            branch: &self.branch,
            self_branch: true,
            deadline: &Unlimited,
        }
    }
}

impl DwSolver {
    pub fn new(metric: &Metric, terminals: &[NodeId]) -> Result<Self> {
        let n = metric.len();
        let mut node_to_local = vec![usize::MAX; n];
        let mut local_to_node = Vec::with_capacity(n);
        for &t in terminals {
            if t >= n {
                return Err(Error::NodeOutOfRange(t));
            }
            if node_to_local[t] != usize::MAX {
                return Err(Error::InvalidParameter(format!("terminal {t} listed twice")));
            }
            node_to_local[t] = local_to_node.len();
            local_to_node.push(t);
        }
        if terminals.len() > TerminalMask::BITS as usize {
            return Err(Error::TooManyTerminals { count: terminals.len(), limit: TerminalMask::BITS as usize });
        }
        for v in 0..n {
            if node_to_local[v] == usize::MAX {
                node_to_local[v] = local_to_node.len();
                local_to_node.push(v);
            }
        }
        let mut dist = Vec::with_capacity(n * n);
        for &a in &local_to_node {
            dist.extend(local_to_node.iter().map(|&b| metric.dist(a, b)));
        }
        Ok(DwSolver {
            local_to_node,
            node_to_local,
            data: DwData { dist, branch: vec![true; n], terminals: terminals.len() },
            cache: DwCache::new(),
        })
    }

    /// Bitmask of a terminal subset.
    pub fn mask(&self, subset: &[NodeId]) -> Result<TerminalMask> {
        let mut mask = 0;
        for &t in subset {
            let local = *self.node_to_local.get(t).ok_or(Error::NodeOutOfRange(t))?;
            if local >= self.data.terminals {
                return Err(Error::InvalidState(format!("node {t} is not a terminal")));
            }
            mask |= bit(local);
        }
        Ok(mask)
    }

    fn local(&self, v: NodeId) -> Result<usize> {
        self.node_to_local.get(v).copied().ok_or(Error::NodeOutOfRange(v))
    }

    pub fn b(&mut self, v: NodeId, subset: &[NodeId]) -> Result<Cost> {
        let (v, mask) = (self.local(v)?, self.mask(subset)?);
        let ctx = self.data.context();
        self.cache.b(&ctx, v, mask)
    }

    pub fn c(&mut self, v: NodeId, subset: &[NodeId]) -> Result<Cost> {
        self.c_with(v, subset, &Unlimited)
    }

    fn c_with(&mut self, v: NodeId, subset: &[NodeId], deadline: &dyn Deadline) -> Result<Cost> {
        let (v, mask) = (self.local(v)?, self.mask(subset)?);
        let ctx = self.data.context().with_deadline(deadline);
        self.cache.c(&ctx, v, mask)
    }

    /// Metric pairs (original ids) of an optimal tree for `C(v, subset)`.
    pub fn tree_pairs(&mut self, v: NodeId, subset: &[NodeId]) -> Result<Vec<(NodeId, NodeId)>> {
        let (lv, mask) = (self.local(v)?, self.mask(subset)?);
        let ctx = self.data.context();
        let pairs = self.cache.tree(&ctx, lv, mask)?;
        Ok(pairs.into_iter().map(|(a, b)| (self.local_to_node[a], self.local_to_node[b])).collect())
    }

    /// Drops every memoized state.
    pub fn clear_cache(&mut self) {
        self.cache.clear();
    }

    pub fn cached_subsets(&self) -> usize {
        self.cache.len()
    }
}

/// Expands metric pairs into original-graph edges.
pub(crate) fn expand_pairs(metric: &Metric, pairs: &[(NodeId, NodeId)]) -> Result<Vec<Edge>> {
    let mut edges = Vec::new();
    for &(a, b) in pairs {
        let path = metric.expand(a, b)?;
        for w in path.windows(2) {
            edges.push(Edge::new(w[0], w[1], metric.dist(w[0], w[1])));
        }
    }
    Ok(edges)
}

/// Optimal Steiner tree by Dreyfus-Wagner.
pub fn solve_exact(instance: &SteinerInstance) -> Result<SteinerTree> {
    solve_exact_with(instance, &Unlimited)
}

pub fn solve_exact_with(instance: &SteinerInstance, deadline: &dyn Deadline) -> Result<SteinerTree> {
    let terminals = &instance.terminals;
    if terminals.is_empty() {
        return Err(Error::EmptyTerminals);
    }
    if terminals.len() > MAX_EXACT_TERMINALS {
        return Err(Error::TooManyTerminals { count: terminals.len(), limit: MAX_EXACT_TERMINALS });
    }
    if terminals.len() == 1 {
        return Ok(SteinerTree::empty());
    }
    let metric = crate::graph::metric_closure(&instance.graph)?;
    let mut dw = DwSolver::new(&metric, terminals)?;
    let (root, rest) = (terminals[0], &terminals[1..]);
    let cost = dw.c_with(root, rest, deadline)?;
    let pairs = dw.tree_pairs(root, rest)?;
    let edges = expand_pairs(&metric, &pairs)?;
    let tree = assemble_tree(instance.graph.node_count(), edges, terminals)?;
    if tree.cost != cost {
        return Err(Error::InvalidTree(format!("reconstructed cost {} differs from optimum {}", tree.cost, cost)));
    }
    Ok(tree)
}
