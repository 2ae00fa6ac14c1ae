use alloc::{vec, vec::Vec};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::{
    fixtures::{blocked_pair, path3, star3},
    instance::validate_tree,
    lp::Relation,
};

fn phase_one(inst: &SteinerInstance, k: usize, prune: bool) -> (Phase, ComponentSet) {
    let ctx = IrContext::new(inst).unwrap();
    let mut phase = ctx.phase(&ctx.initial_state()).unwrap();
    let set = phase.generate(k, CacheMode::Shared, prune, &Unlimited).unwrap();
    (phase, set)
}

#[test]
fn star3_components() {
    let (_, set) = phase_one(&star3(), 3, true);
    let costs: Vec<(Vec<NodeId>, Cost)> = set.subsets.iter().map(|s| (s.terminals.clone(), s.cost)).collect();
    assert_eq!(costs, vec![(vec![0, 1], 2), (vec![0, 2], 2), (vec![1, 2], 2), (vec![0, 1, 2], 3)]);
    assert_eq!(set.components.len(), 9);
    let sinks: Vec<NodeId> = set.components.iter().filter(|c| c.subset == 3).map(|c| c.sink).collect();
    assert_eq!(sinks, vec![0, 1, 2]);
}

#[test]
fn pairs_only_with_k2() {
    let inst = blocked_pair();
    let (_, set) = phase_one(&inst, 2, true);
    let costs: Vec<(Vec<NodeId>, Cost)> = set.subsets.iter().map(|s| (s.terminals.clone(), s.cost)).collect();
    assert_eq!(costs, vec![(vec![0, 2], 2), (vec![1, 2], 2)]);
}

#[test]
fn pruned_subsets_are_absent() {
    let inst = blocked_pair();
    let (_, pruned) = phase_one(&inst, 3, true);
    assert!(pruned.subsets.iter().all(|s| s.terminals != vec![0, 1, 2]));
    let (_, full) = phase_one(&inst, 3, false);
    let triple = full.subsets.iter().find(|s| s.terminals == vec![0, 1, 2]).unwrap();
    assert_eq!(triple.cost, 4);
}

#[test]
fn cache_modes_agree() {
    for inst in [star3(), blocked_pair()] {
        let ctx = IrContext::new(&inst).unwrap();
        let mut shared = ctx.phase(&ctx.initial_state()).unwrap();
        let mut fresh = ctx.phase(&ctx.initial_state()).unwrap();
        let a = shared.generate(3, CacheMode::Shared, false, &Unlimited).unwrap();
        let b = fresh.generate(3, CacheMode::Fresh, false, &Unlimited).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn component_trees_avoid_other_terminals() {
    let inst = blocked_pair();
    let ctx = IrContext::new(&inst).unwrap();
    let mut phase = ctx.phase(&ctx.initial_state()).unwrap();
    let set = phase.generate(3, CacheMode::Shared, false, &Unlimited).unwrap();
    for s in &set.subsets {
        let edges = phase.subset_tree(&inst.graph, &ctx.distances, s, &Unlimited).unwrap();
        let tree = crate::graph::TreeEdges::from_edges(edges);
        assert_eq!(tree.cost, s.cost);
        for v in tree.nodes() {
            assert!(!inst.terminals.contains(&v) || s.terminals.contains(&v));
        }
    }
}

#[test]
fn star3_lp_shape() {
    let (phase, set) = phase_one(&star3(), 3, true);
    let lp = build_k_dcr_lp(&set, phase.active(), 0).unwrap();
    assert_eq!(lp.num_columns(), 9);
    assert_eq!(lp.num_rows(), 2);
    assert!(lp.rows().iter().all(|r| r.relation == Relation::Ge && r.rhs == 1.0));
    assert!(build_k_dcr_lp(&set, phase.active(), 3).is_err());
}

#[test]
fn two_terminal_lp_is_the_distance() {
    let inst = path3();
    let (phase, set) = phase_one(&inst, 2, true);
    let mut lp = build_k_dcr_lp(&set, phase.active(), 0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let out =
        row_generation_solve(&mut lp, &set, phase.active(), 0, &mut DenseSimplex::default(), &mut rng, 10, &Unlimited)
            .unwrap();
    assert!((out.solution.objective - 2.0).abs() < 1e-9);
    assert_eq!(out.rows_generated, 0);
}

#[test]
fn oracle_examples() {
    let (phase, set) = phase_one(&star3(), 3, true);
    let triple_to_0 = set.components.iter().position(|c| c.terminals.len() == 3 && c.sink == 0).unwrap();
    let mut x = vec![0.0; set.components.len()];
    x[triple_to_0] = 1.0;
    assert_eq!(separation_oracle(&x, &set, phase.active(), 0, &[1, 2]).unwrap(), OracleVerdict::Feasible);

    x[triple_to_0] = 0.5;
    match separation_oracle(&x, &set, phase.active(), 0, &[1, 2]).unwrap() {
        OracleVerdict::Violated { terminals, value, row } => {
            assert_eq!(terminals, vec![1]);
            assert!((value - 0.5).abs() < 1e-12);
            let lhs: f64 = row.iter().map(|&(c, a)| a * x[c]).sum();
            assert!((lhs - value).abs() < 1e-12);
        }
        v => panic!("expected a violated cut, got {v:?}"),
    }

    let zero = vec![0.0; set.components.len()];
    match separation_oracle(&zero, &set, phase.active(), 0, &[2, 1]).unwrap() {
        OracleVerdict::Violated { terminals, value, .. } => {
            assert_eq!(value, 0.0);
            assert!(terminals.contains(&2) && !terminals.contains(&0));
        }
        v => panic!("expected a violated cut, got {v:?}"),
    }
}

#[test]
fn star3_row_generation() {
    let (phase, set) = phase_one(&star3(), 3, true);
    let mut lp = build_k_dcr_lp(&set, phase.active(), 0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let out =
        row_generation_solve(&mut lp, &set, phase.active(), 0, &mut DenseSimplex::default(), &mut rng, 100, &Unlimited)
            .unwrap();
    assert!((out.solution.objective - 3.0).abs() < 1e-6);
}

#[test]
fn sampling_frequencies() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    assert!((0..100).all(|_| sample_component(&[0.0, 2.5, 0.0], &mut rng).unwrap() == 1));
    for (x, p0) in [([1.0, 1.0], 0.5), ([3.0, 1.0], 0.75)] {
        let hits = (0..10_000).filter(|_| sample_component(&x, &mut rng).unwrap() == 0).count();
        assert!((hits as f64 / 10_000.0 - p0).abs() < 0.05);
    }
    assert!(sample_component(&[0.0, -1.0], &mut rng).is_err());
}

#[test]
fn star3_is_solved_for_every_seed() {
    let inst = star3();
    for seed in 0..20 {
        let out = ir_steiner_with(&inst, &IrOptions::new(3, seed), &Unlimited).unwrap();
        assert_eq!(out.tree.cost, 3, "seed {seed}");
        assert_eq!(validate_tree(&inst, &out.tree), Ok(3));
        assert_eq!(out.phases.len(), 1);
    }
}

#[test]
fn small_instances() {
    for k in [2, 3, 4] {
        assert_eq!(ir_steiner(&path3(), k, 5).unwrap().cost, 2);
        let inst = blocked_pair();
        let tree = ir_steiner(&inst, k, 5).unwrap();
        assert_eq!(validate_tree(&inst, &tree), Ok(4));
    }
    let single = SteinerInstance::new("one", star3().graph, [1]).unwrap();
    assert_eq!(ir_steiner(&single, 3, 0).unwrap(), SteinerTree::empty());
    assert!(ir_steiner(&star3(), 1, 0).is_err());
}

#[test]
fn cross_checked_run_reports_consistency() {
    let opts = IrOptions { cross_check_cache: true, ..IrOptions::new(2, 3) };
    let out = ir_steiner_with(&star3(), &opts, &Unlimited).unwrap();
    assert!(out.phases.iter().all(|p| p.cache_consistent == Some(true)));
    assert!(out.phases.windows(2).all(|w| w[1].active_terminals < w[0].active_terminals));
}
