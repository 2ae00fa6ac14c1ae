//! Generic iterative rounding: solve an LP, round part of its solution, and
//! repeat on the modified problem until a stop condition holds.

use alloc::{format, string::String};

use crate::{
    error::{Error, Result},
    lp::{LpSolution, LpStatus},
};

/// What a rounding step did to the LP.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoundOutcome {
    /// The LP was modified in place; the next solve may warm start.
    Kept,
    /// The LP was rebuilt; the next solve starts from scratch.
    Replaced,
}

/// The six primitives an iterative rounding algorithm is made of.
pub trait IrComponents {
    type Output;

    /// Builds the first LP and any auxiliary state. Called once.
    fn init(&mut self) -> Result<()>;

    fn stop_condition(&self) -> bool;

    fn solve_lp(&mut self) -> Result<LpSolution>;

    /// Reoptimizes the LP after a [`RoundOutcome::Kept`] step.
    fn resolve_lp(&mut self, previous: &LpSolution) -> Result<LpSolution>;

    /// Inspects an optimal LP solution and changes the problem.
    fn dependent_round(&mut self, solution: &LpSolution) -> Result<RoundOutcome>;

    /// Extracts the final answer. Called once, last.
    fn set_solution(&mut self) -> Result<Self::Output>;
}

#[derive(Debug, Clone, PartialEq)]
pub struct IrRun<T> {
    pub solution: T,
    pub iterations: usize,
}

/// Default iteration budget for an instance with `terminals` terminals.
pub fn default_fuel(terminals: usize) -> usize {
    10 * terminals.max(1)
}

/// Runs `components` to completion, giving up after `fuel` rounds.
pub fn run_ir<C: IrComponents>(components: &mut C, fuel: usize) -> Result<IrRun<C::Output>> {
    components.init()?;
    let mut previous: Option<LpSolution> = None;
    let mut iterations = 0;
    while !components.stop_condition() {
        if iterations >= fuel {
            return Err(Error::FuelExhausted(iterations));
        }
        let solution = match &previous {
            Some(prev) => components.resolve_lp(prev),
            None => components.solve_lp(),
        }
        .map_err(|e| abort(iterations, format!("{e}")))?;
        if solution.status != LpStatus::Optimal {
            return Err(abort(iterations, format!("LP status {:?}", solution.status)));
        }
        let outcome = components.dependent_round(&solution)?;
        previous = match outcome {
            RoundOutcome::Kept => Some(solution),
            RoundOutcome::Replaced => None,
        };
        iterations += 1;
    }
    Ok(IrRun { solution: components.set_solution()?, iterations })
}

fn abort(iteration: usize, reason: String) -> Error {
    Error::RoundingAborted { iteration, reason }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{self, LpProblem, Relation};
    use alloc::{vec, vec::Vec};

    /// Fixes one variable per round to its LP value rounded up, and records
    /// every call.
    struct Mock {
        problem: LpProblem,
        rounds_left: usize,
        replace: bool,
        infeasible_at: Option<usize>,
        log: Vec<&'static str>,
    }

    impl Mock {
        fn new(rounds: usize, replace: bool) -> Self {
            Mock { problem: LpProblem::new(), rounds_left: rounds, replace, infeasible_at: None, log: vec![] }
        }
    }

    impl IrComponents for Mock {
        type Output = usize;

        fn init(&mut self) -> Result<()> {
            self.log.push("init");
            self.problem.add_column(1.0, 0.0, f64::INFINITY)?;
            Ok(())
        }

        fn stop_condition(&self) -> bool {
            self.rounds_left == 0
        }

        fn solve_lp(&mut self) -> Result<LpSolution> {
            self.log.push("solve");
            Ok(lp::solve(&self.problem))
        }

        fn resolve_lp(&mut self, previous: &LpSolution) -> Result<LpSolution> {
            self.log.push("resolve");
            Ok(lp::resolve(&self.problem, previous.basis.as_ref().unwrap()))
        }

        fn dependent_round(&mut self, solution: &LpSolution) -> Result<RoundOutcome> {
            self.log.push("round");
            assert_eq!(solution.status, LpStatus::Optimal);
            self.rounds_left -= 1;
            let rhs = if self.infeasible_at == Some(self.rounds_left) { -1.0 } else { 1.0 + self.rounds_left as f64 };
            let rel = if rhs < 0.0 { Relation::Le } else { Relation::Ge };
            self.problem.add_row(vec![(0, 1.0)], rel, rhs)?;
            Ok(if self.replace { RoundOutcome::Replaced } else { RoundOutcome::Kept })
        }

        fn set_solution(&mut self) -> Result<usize> {
            self.log.push("set");
            Ok(self.log.len())
        }
    }

    #[test]
    fn stops_before_any_round() {
        let mut m = Mock::new(0, false);
        let run = run_ir(&mut m, 5).unwrap();
        assert_eq!(run.iterations, 0);
        assert_eq!(m.log, vec!["init", "set"]);
    }

    #[test]
    fn call_order_with_warm_starts() {
        let mut m = Mock::new(3, false);
        assert_eq!(run_ir(&mut m, 5).unwrap().iterations, 3);
        assert_eq!(m.log, vec!["init", "solve", "round", "resolve", "round", "resolve", "round", "set"]);
    }

    #[test]
    fn replaced_lp_is_solved_fresh() {
        let mut m = Mock::new(2, true);
        run_ir(&mut m, 5).unwrap();
        assert_eq!(m.log, vec!["init", "solve", "round", "solve", "round", "set"]);
    }

    #[test]
    fn fuel_and_infeasibility_abort() {
        let mut m = Mock::new(4, false);
        assert_eq!(run_ir(&mut m, 2), Err(Error::FuelExhausted(2)));

        let mut m = Mock::new(4, false);
        m.infeasible_at = Some(2);
        match run_ir(&mut m, 10) {
            Err(Error::RoundingAborted { iteration, .. }) => assert_eq!(iteration, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(!m.log.contains(&"set"));
    }
}
