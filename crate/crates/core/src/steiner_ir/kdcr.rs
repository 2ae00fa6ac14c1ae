use alloc::{format, vec, vec::Vec};

use rand::{seq::SliceRandom, Rng};

use crate::{
    deadline::Deadline,
    error::{Error, Result},
    graph::{min_st_cut, Capacity, FlowNetwork, NodeId},
    lp::{LpBackend, LpProblem, LpSolution, LpStatus, Relation},
};

use super::components::ComponentSet;

/// Cuts whose value is at least `1 - VIOLATION_TOL` count as satisfied.
pub const VIOLATION_TOL: f64 = 1e-7;

/// Columns with a value at or below this are left out of the cut network.
const ZERO: f64 = 1e-12;

/// Whether component `c` has a source in `inside` and its sink outside.
fn crosses(set: &ComponentSet, c: usize, inside: &[bool], active: &[NodeId]) -> bool {
    let comp = &set.components[c];
    let pos = |t: NodeId| active.binary_search(&t).expect("component over active terminals");
    !inside[pos(comp.sink)] && comp.sources().any(|s| inside[pos(s)])
}

/// Row `Σ x_C ≥ 1` over the components crossing `inside`.
pub fn cut_row(set: &ComponentSet, active: &[NodeId], inside: &[bool]) -> Vec<(usize, f64)> {
    (0..set.components.len()).filter(|&c| crosses(set, c, inside, active)).map(|c| (c, 1.0)).collect()
}

/// The LP over `set` with the singleton cut of every non-root terminal.
pub fn build_k_dcr_lp(set: &ComponentSet, active: &[NodeId], root: NodeId) -> Result<LpProblem> {
    if active.binary_search(&root).is_err() {
        return Err(Error::InvalidParameter(format!("root {root} is not an active terminal")));
    }
    let mut lp = LpProblem::new();
    for c in &set.components {
        lp.add_column(c.cost as f64, 0.0, f64::INFINITY)?;
    }
    for (i, &t) in active.iter().enumerate() {
        if t == root {
            continue;
        }
        let mut inside = vec![false; active.len()];
        inside[i] = true;
        let row = cut_row(set, active, &inside);
        if row.is_empty() {
            return Err(Error::InfeasibleUnderPruning(format!("no component leaves terminal {t}")));
        }
        lp.add_row(row, Relation::Ge, 1.0)?;
    }
    Ok(lp)
}

#[derive(Debug, Clone, PartialEq)]
pub enum OracleVerdict {
    Feasible,
    Violated {
        /// Terminal side of the cut, in increasing order.
        terminals: Vec<NodeId>,
        value: f64,
        row: Vec<(usize, f64)>,
    },
}

/// Looks for a terminal set `U` without the root whose crossing components
/// carry less than one unit under `x`. Terminals are tried in `order`; the
/// first violated minimum cut is returned.
pub fn separation_oracle(
    x: &[f64],
    set: &ComponentSet,
    active: &[NodeId],
    root: NodeId,
    order: &[NodeId],
) -> Result<OracleVerdict> {
    if x.len() != set.components.len() {
        return Err(Error::InvalidParameter(format!("{} values for {} components", x.len(), set.components.len())));
    }
    let a = active.len();
    let pos = |t: NodeId| active.binary_search(&t).map_err(|_| Error::InvalidParameter(format!("{t} is not active")));
    let root_pos = pos(root)?;
    let positive: Vec<usize> = (0..x.len()).filter(|&c| x[c] > ZERO).collect();
    let mut net = FlowNetwork::new(a + positive.len());
    for (h, &c) in positive.iter().enumerate() {
        let comp = &set.components[c];
        for s in comp.sources() {
            net.add_arc(pos(s)?, a + h, Capacity::Infinite);
        }
        net.add_arc(a + h, pos(comp.sink)?, Capacity::Finite(x[c]));
    }
    for &v in order {
        let vp = pos(v)?;
        if vp == root_pos {
            continue;
        }
        let cut = min_st_cut(net.clone(), vp, root_pos)?;
        let Some(value) = cut.value.finite() else { continue };
        if value < 1.0 - VIOLATION_TOL {
            let inside: Vec<bool> = cut.source_side[..a].to_vec();
            let terminals = (0..a).filter(|&i| inside[i]).map(|i| active[i]).collect();
            return Ok(OracleVerdict::Violated { terminals, value, row: cut_row(set, active, &inside) });
        }
    }
    Ok(OracleVerdict::Feasible)
}

#[derive(Debug, Clone)]
pub struct RowGeneration {
    pub solution: LpSolution,
    pub rows_generated: usize,
}

/// Solves `lp` over the full cut system by adding one violated cut at a time.
#[allow(clippy::too_many_arguments)]
pub fn row_generation_solve<R: Rng + ?Sized>(
    lp: &mut LpProblem,
    set: &ComponentSet,
    active: &[NodeId],
    root: NodeId,
    backend: &mut dyn LpBackend,
    rng: &mut R,
    row_cap: usize,
    deadline: &dyn Deadline,
) -> Result<RowGeneration> {
    let mut solution = backend.solve(lp);
    let mut rows_generated = 0;
    let mut order: Vec<NodeId> = active.iter().copied().filter(|&t| t != root).collect();
    loop {
        deadline.check()?;
        if solution.status != LpStatus::Optimal {
            return Err(Error::Lp(format!("k-DCR LP ended {:?} after {rows_generated} added rows", solution.status)));
        }
        order.shuffle(rng);
        match separation_oracle(&solution.values, set, active, root, &order)? {
            OracleVerdict::Feasible => return Ok(RowGeneration { solution, rows_generated }),
            OracleVerdict::Violated { row, .. } => {
                if rows_generated >= row_cap {
                    return Err(Error::Lp(format!("row generation hit its cap of {row_cap} rows")));
                }
                lp.add_row(row, Relation::Ge, 1.0)?;
                rows_generated += 1;
                solution = match &solution.basis {
                    Some(b) => backend.resolve(lp, b),
                    None => backend.solve(lp),
                };
            }
        }
    }
}

/// Index drawn with probability proportional to `x` (negative entries count
/// as zero).
pub fn sample_component<R: Rng + ?Sized>(x: &[f64], rng: &mut R) -> Result<usize> {
    let mut prefix = Vec::with_capacity(x.len());
    let mut total = 0.0;
    for &v in x {
        total += v.max(0.0);
        prefix.push(total);
    }
    if total.is_nan() || total <= 0.0 {
        return Err(Error::InvalidParameter("cannot sample from zero total mass".into()));
    }
    let u = rng.random::<f64>() * total;
    let i = prefix.partition_point(|&p| p <= u);
    // Guard against u landing on the total through rounding.
    Ok(if i < x.len() { i } else { x.iter().rposition(|&v| v > 0.0).expect("positive mass") })
}
