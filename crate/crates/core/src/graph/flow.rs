use alloc::{collections::VecDeque, vec, vec::Vec};

use super::NodeId;
use crate::error::{Error, Result};

/// Residual capacities at or below this are treated as saturated.
const RESIDUAL_EPS: f64 = 1e-12;

/// Arc capacity. `Infinite` is a dedicated value so an uncuttable arc is
/// never confused with a large finite one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Capacity {
    Finite(f64),
    Infinite,
}

impl Capacity {
    fn raw(self) -> f64 {
        match self {
            Capacity::Finite(c) => c,
            Capacity::Infinite => f64::INFINITY,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Capacity::Infinite)
    }

    /// The finite value, if any.
    pub fn finite(self) -> Option<f64> {
        match self {
            Capacity::Finite(c) => Some(c),
            Capacity::Infinite => None,
        }
    }
}

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: f64,
    rev: usize,
}

/// Directed network for max-flow / min-cut queries.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    adj: Vec<Vec<Arc>>,
}

impl FlowNetwork {
    pub fn new(node_count: usize) -> Self {
        FlowNetwork { adj: vec![Vec::new(); node_count] }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn add_arc(&mut self, from: NodeId, to: NodeId, cap: Capacity) {
        let raw = cap.raw();
        debug_assert!(raw >= 0.0, "negative capacity");
        let rf = self.adj[to].len() + usize::from(from == to);
        let rt = self.adj[from].len();
        self.adj[from].push(Arc { to, cap: raw, rev: rf });
        self.adj[to].push(Arc { to: from, cap: 0.0, rev: rt });
    }
}

/// A minimum s-t cut.
#[derive(Debug, Clone, PartialEq)]
pub struct StCut {
    pub value: Capacity,
    /// Nodes reachable from `s` in the final residual network. Excludes `t`
    /// unless the value is infinite.
    pub source_side: Vec<bool>,
}

impl StCut {
    pub fn source_nodes(&self) -> Vec<NodeId> {
        (0..self.source_side.len()).filter(|&n| self.source_side[n]).collect()
    }
}

/// Minimum s-t cut by Dinic's algorithm. Consumes the network because the
/// residual capacities are left in place.
pub fn min_st_cut(mut net: FlowNetwork, s: NodeId, t: NodeId) -> Result<StCut> {
    let n = net.node_count();
    if s >= n {
        return Err(Error::NodeOutOfRange(s));
    }
    if t >= n {
        return Err(Error::NodeOutOfRange(t));
    }
    if s == t {
        return Err(Error::SourceIsSink);
    }
    let mut flow = 0.0f64;
    let mut level = vec![usize::MAX; n];
    let mut iter = vec![0usize; n];
    loop {
        bfs_levels(&net, s, &mut level);
        if level[t] == usize::MAX {
            break;
        }
        iter.iter_mut().for_each(|i| *i = 0);
        loop {
            let pushed = augment(&mut net, s, t, f64::INFINITY, &level, &mut iter);
            if pushed == f64::INFINITY {
                let source_side = reachable(&net, s);
                return Ok(StCut { value: Capacity::Infinite, source_side });
            }
            if pushed <= RESIDUAL_EPS {
                break;
            }
            flow += pushed;
        }
    }
    let source_side = reachable(&net, s);
    Ok(StCut { value: Capacity::Finite(flow), source_side })
}

fn bfs_levels(net: &FlowNetwork, s: usize, level: &mut [usize]) {
    level.iter_mut().for_each(|l| *l = usize::MAX);
    level[s] = 0;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for a in &net.adj[u] {
            if a.cap > RESIDUAL_EPS && level[a.to] == usize::MAX {
                level[a.to] = level[u] + 1;
                queue.push_back(a.to);
            }
        }
    }
}

fn augment(
    net: &mut FlowNetwork,
    u: usize,
    t: usize,
    limit: f64,
    level: &[usize],
    iter: &mut [usize],
) -> f64 {
    if u == t {
        return limit;
    }
    while iter[u] < net.adj[u].len() {
        let Arc { to, cap, rev } = net.adj[u][iter[u]];
        if cap > RESIDUAL_EPS && level[to] == level[u].wrapping_add(1) {
            let got = augment(net, to, t, limit.min(cap), level, iter);
            if got > RESIDUAL_EPS {
                if got.is_finite() {
                    net.adj[u][iter[u]].cap -= got;
                    net.adj[to][rev].cap += got;
                }
                return got;
            }
        }
        iter[u] += 1;
    }
    0.0
}

fn reachable(net: &FlowNetwork, s: usize) -> Vec<bool> {
    let mut seen = vec![false; net.node_count()];
    seen[s] = true;
    let mut stack = vec![s];
    while let Some(u) = stack.pop() {
        for a in &net.adj[u] {
            if a.cap > RESIDUAL_EPS && !seen[a.to] {
                seen[a.to] = true;
                stack.push(a.to);
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;

    fn value(cut: &StCut) -> f64 {
        cut.value.finite().unwrap()
    }

    #[test]
    fn single_arc() {
        let mut net = FlowNetwork::new(2);
        net.add_arc(0, 1, Capacity::Finite(0.5));
        let cut = min_st_cut(net, 0, 1).unwrap();
        assert!((value(&cut) - 0.5).abs() < 1e-12);
        assert_eq!(cut.source_nodes(), vec![0]);
    }

    #[test]
    fn two_parallel_paths() {
        // s=0 -> 1 -> t=3 with bottleneck 0.3, s -> 2 -> t with bottleneck 0.7
        let mut net = FlowNetwork::new(4);
        net.add_arc(0, 1, Capacity::Finite(0.3));
        net.add_arc(1, 3, Capacity::Infinite);
        net.add_arc(0, 2, Capacity::Infinite);
        net.add_arc(2, 3, Capacity::Finite(0.7));
        let cut = min_st_cut(net, 0, 3).unwrap();
        assert!((value(&cut) - 1.0).abs() < 1e-12);
        assert_eq!(cut.source_nodes(), vec![0, 2]);
    }

    #[test]
    fn no_path_gives_zero_and_reachable_side() {
        let mut net = FlowNetwork::new(4);
        net.add_arc(0, 1, Capacity::Finite(1.0));
        net.add_arc(3, 0, Capacity::Finite(1.0));
        let cut = min_st_cut(net, 0, 3).unwrap();
        assert_eq!(value(&cut), 0.0);
        assert_eq!(cut.source_nodes(), vec![0, 1]);
    }

    #[test]
    fn infinite_path_is_reported() {
        let mut net = FlowNetwork::new(3);
        net.add_arc(0, 1, Capacity::Infinite);
        net.add_arc(1, 2, Capacity::Infinite);
        let cut = min_st_cut(net, 0, 2).unwrap();
        assert!(cut.value.is_infinite());
    }

    #[test]
    fn same_endpoints_rejected() {
        assert_eq!(min_st_cut(FlowNetwork::new(2), 1, 1), Err(Error::SourceIsSink));
    }
}
