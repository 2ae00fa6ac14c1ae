//! Randomized LP rounding over directed components.
//!
//! Each phase enumerates optimal trees on every subset of at most `k` active
//! terminals, solves the directed-component cut LP by row generation, draws
//! one component with probability proportional to its LP value and contracts
//! its terminals into its sink. The answer is assembled from the drawn trees
//! once a single terminal is left.
//!
//! Component trees may not pass through terminals outside their own subset.
//! Distances are therefore measured along paths whose interior avoids every
//! terminal, and contracted terminals take the smallest distance over their
//! members.

mod components;
mod contraction;
mod kdcr;
mod reach;

use alloc::{format, vec::Vec};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use components::{CacheMode, ComponentSet, DirectedComponent, Phase, SubsetTree};
pub use contraction::{ContractionState, FilteredDistances};
pub use kdcr::{
    build_k_dcr_lp, cut_row, row_generation_solve, sample_component, separation_oracle, OracleVerdict, RowGeneration,
    VIOLATION_TOL,
};
pub use reach::{nonterminal_connectivity_preprocess, ReachabilityTable};

use crate::{
    deadline::{Deadline, Unlimited},
    error::{Error, Result},
    graph::{assemble_tree, Cost, NodeId},
    instance::{SteinerInstance, SteinerTree},
    iterative_rounding::{default_fuel, run_ir, IrComponents, RoundOutcome},
    lp::{DenseSimplex, LpBackend, LpSolution},
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IrOptions {
    /// Largest component size, at least 2.
    pub k: usize,
    pub seed: u64,
    pub cache: CacheMode,
    /// Skip subsets containing a terminal pair that no terminal-free path joins.
    pub prune: bool,
    /// Also generate every phase with the other cache mode and compare.
    pub cross_check_cache: bool,
    /// Most cut rows row generation may add per phase.
    pub row_cap: usize,
    /// Most phases; defaults to ten per terminal.
    pub fuel: Option<usize>,
}

impl Default for IrOptions {
    fn default() -> Self {
        IrOptions {
            k: 3,
            seed: 0,
            cache: CacheMode::Shared,
            prune: true,
            cross_check_cache: false,
            row_cap: 10_000,
            fuel: None,
        }
    }
}

impl IrOptions {
    pub fn new(k: usize, seed: u64) -> Self {
        IrOptions { k, seed, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseReport {
    pub active_terminals: usize,
    pub subsets: usize,
    pub components: usize,
    pub initial_rows: usize,
    pub rows_generated: usize,
    pub lp_objective: f64,
    /// Terminals, sink and cost of the drawn component.
    pub drawn: (Vec<NodeId>, NodeId, Cost),
    /// With cross-checking on: whether both cache modes produced the same
    /// components.
    pub cache_consistent: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IrOutcome {
    pub tree: SteinerTree,
    pub phases: Vec<PhaseReport>,
}

/// Instance-wide data every phase reads.
pub struct IrContext<'a> {
    pub instance: &'a SteinerInstance,
    pub distances: FilteredDistances,
    pub table: ReachabilityTable,
}

impl<'a> IrContext<'a> {
    pub fn new(instance: &'a SteinerInstance) -> Result<Self> {
        let distances = FilteredDistances::new(&instance.graph, &instance.is_terminal_mask());
        let table = nonterminal_connectivity_preprocess(&instance.graph, &instance.terminals)?;
        Ok(IrContext { instance, distances, table })
    }

    pub fn initial_state(&self) -> ContractionState {
        ContractionState::new(self.instance.graph.node_count(), &self.instance.terminals)
    }

    pub fn phase(&self, state: &ContractionState) -> Result<Phase> {
        Phase::new(state, &self.distances, &self.table)
    }
}

struct SteinerIr<'a> {
    ctx: IrContext<'a>,
    options: IrOptions,
    state: ContractionState,
    rng: ChaCha8Rng,
    backend: &'a mut dyn LpBackend,
    deadline: &'a dyn Deadline,
    current: Option<(Phase, ComponentSet, PhaseReport)>,
    phases: Vec<PhaseReport>,
}

impl IrComponents for SteinerIr<'_> {
    type Output = SteinerTree;

    fn init(&mut self) -> Result<()> {
        if self.options.k < 2 {
            return Err(Error::InvalidParameter(format!("component size {} is below 2", self.options.k)));
        }
        Ok(())
    }

    fn stop_condition(&self) -> bool {
        self.state.active().len() <= 1
    }

    fn solve_lp(&mut self) -> Result<LpSolution> {
        let opts = self.options;
        let mut phase = self.ctx.phase(&self.state)?;
        let set = phase.generate(opts.k, opts.cache, opts.prune, self.deadline)?;
        let cache_consistent = if opts.cross_check_cache {
            let other = match opts.cache {
                CacheMode::Shared => CacheMode::Fresh,
                CacheMode::Fresh => CacheMode::Shared,
            };
            let mut twin = self.ctx.phase(&self.state)?;
            let same = twin.generate(opts.k, other, opts.prune, self.deadline)?.signature() == set.signature();
            if !same {
                log::warn!("cache modes disagree in phase {}", self.phases.len());
            }
            Some(same)
        } else {
            None
        };

        let active = self.state.active().to_vec();
        let root = active[0];
        let mut lp = build_k_dcr_lp(&set, &active, root)?;
        let initial_rows = lp.num_rows();
        let generated =
            row_generation_solve(&mut lp, &set, &active, root, self.backend, &mut self.rng, opts.row_cap, self.deadline)?;
        log::debug!(
            "phase {}: {} terminals, {} components, LP {:.6} after {} cuts",
            self.phases.len(),
            active.len(),
            set.components.len(),
            generated.solution.objective,
            generated.rows_generated
        );
        let report = PhaseReport {
            active_terminals: active.len(),
            subsets: set.subsets.len(),
            components: set.components.len(),
            initial_rows,
            rows_generated: generated.rows_generated,
            lp_objective: generated.solution.objective,
            drawn: (Vec::new(), root, 0),
            cache_consistent,
        };
        self.current = Some((phase, set, report));
        Ok(generated.solution)
    }

    fn resolve_lp(&mut self, _: &LpSolution) -> Result<LpSolution> {
        // Every round contracts terminals and replaces the LP.
        self.solve_lp()
    }

    fn dependent_round(&mut self, solution: &LpSolution) -> Result<RoundOutcome> {
        let (mut phase, set, mut report) =
            self.current.take().ok_or_else(|| Error::InvalidState("rounding without an LP".into()))?;
        let c = sample_component(&solution.values, &mut self.rng)?;
        let comp = &set.components[c];
        let tree = phase.subset_tree(&self.ctx.instance.graph, &self.ctx.distances, &set.subsets[comp.subset], self.deadline)?;
        report.drawn = (comp.terminals.clone(), comp.sink, comp.cost);
        self.state.contract(comp, tree)?;
        self.phases.push(report);
        Ok(RoundOutcome::Replaced)
    }

    fn set_solution(&mut self) -> Result<SteinerTree> {
        let inst = self.ctx.instance;
        assemble_tree(inst.graph.node_count(), self.state.accumulated().iter().copied(), &inst.terminals)
    }
}

/// Runs the rounding algorithm with components of at most `k` terminals.
pub fn ir_steiner(instance: &SteinerInstance, k: usize, seed: u64) -> Result<SteinerTree> {
    Ok(ir_steiner_with(instance, &IrOptions::new(k, seed), &Unlimited)?.tree)
}

pub fn ir_steiner_with(instance: &SteinerInstance, options: &IrOptions, deadline: &dyn Deadline) -> Result<IrOutcome> {
    ir_steiner_with_backend(instance, options, &mut DenseSimplex::default(), deadline)
}

/// Like [`ir_steiner_with`] with a caller-supplied LP solver.
pub fn ir_steiner_with_backend(
    instance: &SteinerInstance,
    options: &IrOptions,
    backend: &mut dyn LpBackend,
    deadline: &dyn Deadline,
) -> Result<IrOutcome> {
    if instance.terminals.is_empty() {
        return Err(Error::EmptyTerminals);
    }
    let ctx = IrContext::new(instance)?;
    let state = ctx.initial_state();
    let mut ir = SteinerIr {
        ctx,
        options: *options,
        state,
        rng: ChaCha8Rng::seed_from_u64(options.seed),
        backend,
        deadline,
        current: None,
        phases: Vec::new(),
    };
    let fuel = options.fuel.unwrap_or_else(|| default_fuel(instance.terminals.len()));
    let run = run_ir(&mut ir, fuel)?;
    Ok(IrOutcome { tree: run.solution, phases: ir.phases })
}

#[cfg(test)]
mod tests;
