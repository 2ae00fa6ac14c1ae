//! Linear programs `min c·x` over bounded columns and `≥ / ≤ / =` rows,
//! solved by a dense bounded revised simplex.
//!
//! Rows may be added after a solve; [`resolve`] then restarts from the old
//! basis with the new rows' slacks basic and reoptimizes with the dual
//! simplex. Whenever that is not possible it silently solves from scratch.

mod simplex;

use alloc::{format, vec::Vec};

use crate::error::{Error, Result};

pub use simplex::DenseSimplex;

/// Feasibility and optimality tolerance of the engine.
pub const LP_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Column {
    pub cost: f64,
    pub lower: f64,
    /// `f64::INFINITY` for no upper bound.
    pub upper: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Ge,
    Le,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    /// `(column, coefficient)` pairs with distinct columns.
    pub coefs: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Row {
    pub fn activity(&self, x: &[f64]) -> f64 {
        self.coefs.iter().map(|&(j, a)| a * x[j]).sum()
    }

    /// How far `x` is from satisfying the row; zero when it does.
    pub fn violation(&self, x: &[f64]) -> f64 {
        let lhs = self.activity(x);
        match self.relation {
            Relation::Ge => (self.rhs - lhs).max(0.0),
            Relation::Le => (lhs - self.rhs).max(0.0),
            Relation::Eq => (lhs - self.rhs).abs(),
        }
    }
}

/// A minimization problem.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LpProblem {
    columns: Vec<Column>,
    rows: Vec<Row>,
}

impl LpProblem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_column(&mut self, cost: f64, lower: f64, upper: f64) -> Result<usize> {
        if !lower.is_finite() || upper.is_nan() || !cost.is_finite() || lower > upper {
            return Err(Error::Lp(format!("bad column: cost {cost}, bounds [{lower}, {upper}]")));
        }
        self.columns.push(Column { cost, lower, upper });
        Ok(self.columns.len() - 1)
    }

    pub fn add_row(&mut self, coefs: Vec<(usize, f64)>, relation: Relation, rhs: f64) -> Result<usize> {
        if !rhs.is_finite() {
            return Err(Error::Lp(format!("row right-hand side {rhs} is not finite")));
        }
        let mut seen = Vec::with_capacity(coefs.len());
        for &(j, a) in &coefs {
            if j >= self.columns.len() {
                return Err(Error::Lp(format!("row references column {j} of {}", self.columns.len())));
            }
            if !a.is_finite() {
                return Err(Error::Lp(format!("coefficient {a} on column {j} is not finite")));
            }
            seen.push(j);
        }
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Lp("row lists a column twice".into()));
        }
        self.rows.push(Row { coefs, relation, rhs });
        Ok(self.rows.len() - 1)
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn num_columns(&self) -> usize {
        self.columns.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        self.columns.iter().zip(x).map(|(c, v)| c.cost * v).sum()
    }

    /// Largest bound or row violation of `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let bounds = self.columns.iter().zip(x).map(|(c, &v)| (c.lower - v).max(v - c.upper).max(0.0));
        let rows = self.rows.iter().map(|r| r.violation(x));
        bounds.chain(rows).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    NumericalFailure,
}

/// Warm-start handle: which variables are basic and where the others sit.
/// Variables `0..columns` are structural, the rest are row slacks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basis {
    pub(crate) columns: usize,
    pub(crate) basic: Vec<usize>,
    pub(crate) at_upper: Vec<bool>,
}

impl Basis {
    pub fn rows(&self) -> usize {
        self.basic.len()
    }

    pub fn columns(&self) -> usize {
        self.columns
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub objective: f64,
    pub values: Vec<f64>,
    /// Present when the solve ended with a usable basis.
    pub basis: Option<Basis>,
    pub iterations: usize,
    /// Whether the result came from the supplied warm start.
    pub warm_started: bool,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

/// A solver the iterative rounding code can be pointed at.
pub trait LpBackend {
    fn solve(&mut self, problem: &LpProblem) -> LpSolution;

    /// Reoptimizes after rows were appended to the problem `basis` came from.
    fn resolve(&mut self, problem: &LpProblem, basis: &Basis) -> LpSolution;
}

pub fn solve(problem: &LpProblem) -> LpSolution {
    DenseSimplex::default().solve(problem)
}

pub fn resolve(problem: &LpProblem, basis: &Basis) -> LpSolution {
    DenseSimplex::default().resolve(problem, basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    const INF: f64 = f64::INFINITY;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-9
    }

    #[test]
    fn single_bound_row() {
        let mut p = LpProblem::new();
        p.add_column(1.0, 0.0, INF).unwrap();
        p.add_row(vec![(0, 1.0)], Relation::Ge, 1.0).unwrap();
        let s = solve(&p);
        assert_eq!(s.status, LpStatus::Optimal);
        assert!(close(s.objective, 1.0) && close(s.values[0], 1.0));
    }

    #[test]
    fn two_variable_vertex() {
        let mut p = LpProblem::new();
        p.add_column(3.0, 0.0, INF).unwrap();
        p.add_column(2.0, 0.0, INF).unwrap();
        p.add_row(vec![(0, 1.0), (1, 1.0)], Relation::Ge, 2.0).unwrap();
        let s = solve(&p);
        assert!(close(s.objective, 4.0));
        assert!(close(s.values[0], 0.0) && close(s.values[1], 2.0));
    }

    #[test]
    fn contradictory_rows() {
        let mut p = LpProblem::new();
        p.add_column(0.0, 0.0, INF).unwrap();
        p.add_row(vec![(0, 1.0)], Relation::Ge, 2.0).unwrap();
        p.add_row(vec![(0, 1.0)], Relation::Le, 1.0).unwrap();
        assert_eq!(solve(&p).status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_direction() {
        let mut p = LpProblem::new();
        p.add_column(-1.0, 0.0, INF).unwrap();
        p.add_column(1.0, 0.0, INF).unwrap();
        p.add_row(vec![(0, 1.0), (1, -1.0)], Relation::Le, 3.0).unwrap();
        assert!(close(solve(&p).objective, -3.0));

        let mut p = LpProblem::new();
        p.add_column(-1.0, 0.0, INF).unwrap();
        p.add_column(-1.0, 0.0, INF).unwrap();
        p.add_row(vec![(0, 1.0), (1, -1.0)], Relation::Le, 3.0).unwrap();
        assert_eq!(solve(&p).status, LpStatus::Unbounded);
    }

    #[test]
    fn added_rows_and_resolve() {
        let mut p = LpProblem::new();
        p.add_column(1.0, 0.0, INF).unwrap();
        let s = solve(&p);
        assert!(close(s.objective, 0.0));
        p.add_row(vec![(0, 1.0)], Relation::Ge, 1.0).unwrap();
        let s = resolve(&p, s.basis.as_ref().unwrap());
        assert!(s.warm_started);
        assert!(close(s.objective, 1.0));
    }

    #[test]
    fn cut_raises_objective() {
        // min 3x + 2y, x + y ≥ 2 → 4; add x ≥ 1 → (1, 1), 5
        let mut p = LpProblem::new();
        p.add_column(3.0, 0.0, INF).unwrap();
        p.add_column(2.0, 0.0, INF).unwrap();
        p.add_row(vec![(0, 1.0), (1, 1.0)], Relation::Ge, 2.0).unwrap();
        let first = solve(&p);
        let basis = first.basis.clone().unwrap();

        let same = resolve(&p, &basis);
        assert!(close(same.objective, first.objective));

        let mut satisfied = p.clone();
        satisfied.add_row(vec![(1, 1.0)], Relation::Le, 5.0).unwrap();
        assert!(close(resolve(&satisfied, &basis).objective, 4.0));

        p.add_row(vec![(0, 1.0)], Relation::Ge, 1.0).unwrap();
        let warm = resolve(&p, &basis);
        assert!(close(warm.objective, 5.0));
        assert!(close(warm.objective, solve(&p).objective));
        assert!(close(warm.values[0], 1.0) && close(warm.values[1], 1.0));

        p.add_row(vec![(0, 1.0), (1, 1.0)], Relation::Le, 1.0).unwrap();
        assert_eq!(resolve(&p, warm.basis.as_ref().unwrap()).status, LpStatus::Infeasible);
    }

    #[test]
    fn equality_and_upper_bounds() {
        // min -x - y, x + 2y = 4, x ≤ 3, y ≤ 3 → x = 3, y = 0.5
        let mut p = LpProblem::new();
        p.add_column(-1.0, 0.0, 3.0).unwrap();
        p.add_column(-1.0, 0.0, 3.0).unwrap();
        p.add_row(vec![(0, 1.0), (1, 2.0)], Relation::Eq, 4.0).unwrap();
        let s = solve(&p);
        assert_eq!(s.status, LpStatus::Optimal);
        assert!(close(s.objective, -3.5));
        assert!(close(s.values[0], 3.0) && close(s.values[1], 0.5));
    }

    #[test]
    fn malformed_input() {
        let mut p = LpProblem::new();
        assert!(p.add_column(1.0, 2.0, 1.0).is_err());
        assert!(p.add_column(1.0, -INF, 1.0).is_err());
        p.add_column(1.0, 0.0, 1.0).unwrap();
        assert!(p.add_row(vec![(1, 1.0)], Relation::Ge, 0.0).is_err());
        assert!(p.add_row(vec![(0, 1.0), (0, 2.0)], Relation::Ge, 0.0).is_err());
    }

    #[test]
    fn mismatched_basis_falls_back() {
        let mut p = LpProblem::new();
        p.add_column(1.0, 0.0, INF).unwrap();
        p.add_row(vec![(0, 1.0)], Relation::Ge, 2.0).unwrap();
        let basis = solve(&p).basis.unwrap();
        let mut q = LpProblem::new();
        q.add_column(1.0, 0.0, INF).unwrap();
        q.add_column(1.0, 0.0, INF).unwrap();
        q.add_row(vec![(0, 1.0), (1, 1.0)], Relation::Ge, 3.0).unwrap();
        let s = resolve(&q, &basis);
        assert!(!s.warm_started);
        assert!(close(s.objective, 3.0));
    }
}
