use alloc::{vec, vec::Vec};

use super::{Basis, LpBackend, LpProblem, LpSolution, LpStatus, Relation, LP_TOLERANCE};

const PIVOT_TOL: f64 = 1e-9;
const TIE_TOL: f64 = 1e-12;
const ACCEPT_TOL: f64 = 1e-6;

/// Dense bounded revised simplex.
#[derive(Debug, Clone, Copy)]
pub struct DenseSimplex {
    /// Consecutive degenerate pivots before switching to Bland's rule.
    pub bland_after: usize,
    /// Pivots between refactorizations of the basis inverse.
    pub refactor_every: usize,
}

impl Default for DenseSimplex {
    fn default() -> Self {
        DenseSimplex { bland_after: 50, refactor_every: 64 }
    }
}

impl LpBackend for DenseSimplex {
    fn solve(&mut self, problem: &LpProblem) -> LpSolution {
        let mut engine = Engine::new(problem, *self);
        engine.cold_start();
        engine.run(problem, false)
    }

    fn resolve(&mut self, problem: &LpProblem, basis: &Basis) -> LpSolution {
        let mut engine = Engine::new(problem, *self);
        if engine.warm_start(basis) {
            let out = engine.run(problem, true);
            if out.status != LpStatus::NumericalFailure {
                return out;
            }
            log::debug!("warm start failed numerically, solving from scratch");
        }
        self.solve(problem)
    }
}

enum Phase {
    Done,
    Infeasible,
    Unbounded,
    Failed,
}

struct Engine {
    n: usize,
    m: usize,
    opts: DenseSimplex,
    /// Structural columns as `(row, coefficient)` lists.
    cols: Vec<Vec<(usize, f64)>>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    cost: Vec<f64>,
    basic: Vec<usize>,
    /// Position in `basic`, `usize::MAX` when nonbasic.
    pos: Vec<usize>,
    at_upper: Vec<bool>,
    binv: Vec<f64>,
    xb: Vec<f64>,
    iterations: usize,
    since_refactor: usize,
    degenerate: usize,
}

impl Engine {
    fn new(p: &LpProblem, opts: DenseSimplex) -> Self {
        let (n, m) = (p.num_columns(), p.num_rows());
        let mut cols = vec![Vec::new(); n];
        for (i, row) in p.rows().iter().enumerate() {
            for &(j, a) in &row.coefs {
                if a != 0.0 {
                    cols[j].push((i, a));
                }
            }
        }
        let mut lower = Vec::with_capacity(n + m);
        let mut upper = Vec::with_capacity(n + m);
        let mut cost = Vec::with_capacity(n + m);
        for c in p.columns() {
            lower.push(c.lower);
            upper.push(c.upper);
            cost.push(c.cost);
        }
        for r in p.rows() {
            let (l, u) = match r.relation {
                Relation::Ge => (r.rhs, f64::INFINITY),
                Relation::Le => (f64::NEG_INFINITY, r.rhs),
                Relation::Eq => (r.rhs, r.rhs),
            };
            lower.push(l);
            upper.push(u);
            cost.push(0.0);
        }
        Engine {
            n,
            m,
            opts,
            cols,
            lower,
            upper,
            cost,
            basic: Vec::new(),
            pos: vec![usize::MAX; n + m],
            at_upper: vec![false; n + m],
            binv: Vec::new(),
            xb: vec![0.0; m],
            iterations: 0,
            since_refactor: 0,
            degenerate: 0,
        }
    }

    /// All slacks basic; structurals at the bound that makes their reduced
    /// cost dual feasible when possible.
    fn cold_start(&mut self) {
        self.basic = (self.n..self.n + self.m).collect();
        self.pos.iter_mut().for_each(|p| *p = usize::MAX);
        for (i, &v) in self.basic.iter().enumerate() {
            self.pos[v] = i;
        }
        for j in 0..self.n {
            self.at_upper[j] = self.cost[j] < 0.0 && self.upper[j].is_finite();
        }
        self.binv = vec![0.0; self.m * self.m];
        for i in 0..self.m {
            self.binv[i * self.m + i] = -1.0;
        }
        self.since_refactor = 0;
    }

    fn warm_start(&mut self, basis: &Basis) -> bool {
        if basis.columns != self.n || basis.basic.len() > self.m || basis.at_upper.len() != self.n + basis.basic.len() {
            return false;
        }
        let old_m = basis.basic.len();
        self.basic = basis.basic.clone();
        self.basic.extend(self.n + old_m..self.n + self.m);
        self.pos.iter_mut().for_each(|p| *p = usize::MAX);
        for (i, &v) in self.basic.iter().enumerate() {
            if v >= self.n + self.m || self.pos[v] != usize::MAX {
                return false;
            }
            self.pos[v] = i;
        }
        self.at_upper[..basis.at_upper.len()].copy_from_slice(&basis.at_upper);
        for v in 0..self.n + self.m {
            if self.pos[v] == usize::MAX && !self.value_is_finite(v) {
                return false;
            }
        }
        self.refactor()
    }

    fn value_is_finite(&self, v: usize) -> bool {
        if self.at_upper[v] {
            self.upper[v].is_finite()
        } else {
            self.lower[v].is_finite()
        }
    }

    fn nonbasic_value(&self, v: usize) -> f64 {
        if self.at_upper[v] {
            self.upper[v]
        } else {
            self.lower[v]
        }
    }

    /// Applies `f(row, coefficient)` to the nonzeros of variable `v`'s column.
    #[inline]
    fn for_column(&self, v: usize, mut f: impl FnMut(usize, f64)) {
        if v < self.n {
            for &(i, a) in &self.cols[v] {
                f(i, a);
            }
        } else {
            f(v - self.n, -1.0);
        }
    }

    fn dot_column(&self, v: usize, y: &[f64]) -> f64 {
        let mut s = 0.0;
        self.for_column(v, |i, a| s += y[i] * a);
        s
    }

    fn ftran(&self, v: usize) -> Vec<f64> {
        let m = self.m;
        let mut out = vec![0.0; m];
        self.for_column(v, |k, a| {
            for (i, o) in out.iter_mut().enumerate() {
                *o += self.binv[i * m + k] * a;
            }
        });
        out
    }

    /// Inverts the basis matrix by Gauss-Jordan with partial pivoting.
    fn refactor(&mut self) -> bool {
        let m = self.m;
        let mut b = vec![0.0; m * m];
        for (k, &v) in self.basic.iter().enumerate() {
            let mut col = Vec::new();
            self.for_column(v, |i, a| col.push((i, a)));
            for (i, a) in col {
                b[i * m + k] = a;
            }
        }
        let mut inv = vec![0.0; m * m];
        for i in 0..m {
            inv[i * m + i] = 1.0;
        }
        for c in 0..m {
            let p = (c..m).max_by(|&x, &y| b[x * m + c].abs().total_cmp(&b[y * m + c].abs())).unwrap_or(c);
            if b[p * m + c].abs() < PIVOT_TOL {
                return false;
            }
            if p != c {
                for k in 0..m {
                    b.swap(p * m + k, c * m + k);
                    inv.swap(p * m + k, c * m + k);
                }
            }
            let d = b[c * m + c];
            for k in 0..m {
                b[c * m + k] /= d;
                inv[c * m + k] /= d;
            }
            for r in 0..m {
                if r == c {
                    continue;
                }
                let f = b[r * m + c];
                if f == 0.0 {
                    continue;
                }
                for k in 0..m {
                    b[r * m + k] -= f * b[c * m + k];
                    inv[r * m + k] -= f * inv[c * m + k];
                }
            }
        }
        self.binv = inv;
        self.since_refactor = 0;
        true
    }

    fn compute_xb(&mut self) {
        let m = self.m;
        let mut rhs = vec![0.0; m];
        for v in 0..self.n + m {
            if self.pos[v] != usize::MAX {
                continue;
            }
            let x = self.nonbasic_value(v);
            if x != 0.0 {
                self.for_column(v, |i, a| rhs[i] += a * x);
            }
        }
        for i in 0..m {
            let row = &self.binv[i * m..(i + 1) * m];
            self.xb[i] = -row.iter().zip(&rhs).map(|(b, r)| b * r).sum::<f64>();
        }
    }

    fn duals(&self, basic_cost: &[f64]) -> Vec<f64> {
        let m = self.m;
        let mut y = vec![0.0; m];
        for (i, &c) in basic_cost.iter().enumerate() {
            if c != 0.0 {
                for (k, yk) in y.iter_mut().enumerate() {
                    *yk += c * self.binv[i * m + k];
                }
            }
        }
        y
    }

    fn pivot(&mut self, entering: usize, r: usize, alpha: &[f64]) {
        let m = self.m;
        let piv = alpha[r];
        for k in 0..m {
            self.binv[r * m + k] /= piv;
        }
        for i in 0..m {
            if i == r || alpha[i] == 0.0 {
                continue;
            }
            let f = alpha[i];
            for k in 0..m {
                self.binv[i * m + k] -= f * self.binv[r * m + k];
            }
        }
        let leaving = self.basic[r];
        self.pos[leaving] = usize::MAX;
        self.basic[r] = entering;
        self.pos[entering] = r;
        self.since_refactor += 1;
    }

    fn iteration_limit(&self) -> usize {
        200 * (self.n + self.m) + 10_000
    }

    /// Shared per-iteration bookkeeping; false when the run must give up.
    fn tick(&mut self) -> bool {
        self.iterations += 1;
        if self.iterations > self.iteration_limit() {
            return false;
        }
        if self.since_refactor >= self.opts.refactor_every && !self.refactor() {
            return false;
        }
        self.compute_xb();
        true
    }

    fn note_step(&mut self, step: f64) -> bool {
        if step < TIE_TOL {
            self.degenerate += 1;
        } else {
            self.degenerate = 0;
        }
        self.degenerate >= self.opts.bland_after
    }

    fn infeasibility(&self, i: usize) -> f64 {
        let v = self.basic[i];
        (self.lower[v] - self.xb[i]).max(self.xb[i] - self.upper[v]).max(0.0)
    }

    fn dual_feasible(&self) -> bool {
        let cb: Vec<f64> = self.basic.iter().map(|&v| self.cost[v]).collect();
        let y = self.duals(&cb);
        (0..self.n + self.m).all(|v| {
            if self.pos[v] != usize::MAX || self.lower[v] == self.upper[v] {
                return true;
            }
            let d = self.cost[v] - self.dot_column(v, &y);
            if self.at_upper[v] {
                d <= LP_TOLERANCE
            } else {
                d >= -LP_TOLERANCE
            }
        })
    }

    /// Primal simplex. In phase one the objective is the total bound
    /// violation of the basic variables.
    fn primal(&mut self, phase_one: bool) -> Phase {
        let mut bland = false;
        loop {
            if !self.tick() {
                return Phase::Failed;
            }
            let cb: Vec<f64> = if phase_one {
                let mut any = false;
                let cb = (0..self.m)
                    .map(|i| {
                        let v = self.basic[i];
                        if self.xb[i] < self.lower[v] - LP_TOLERANCE {
                            any = true;
                            -1.0
                        } else if self.xb[i] > self.upper[v] + LP_TOLERANCE {
                            any = true;
                            1.0
                        } else {
                            0.0
                        }
                    })
                    .collect();
                if !any {
                    return Phase::Done;
                }
                cb
            } else {
                self.basic.iter().map(|&v| self.cost[v]).collect()
            };
            let y = self.duals(&cb);

            let mut entering = None;
            let mut best = 0.0;
            for v in 0..self.n + self.m {
                if self.pos[v] != usize::MAX || self.lower[v] == self.upper[v] {
                    continue;
                }
                let c = if phase_one { 0.0 } else { self.cost[v] };
                let d = c - self.dot_column(v, &y);
                let improving = if self.at_upper[v] { d > LP_TOLERANCE } else { d < -LP_TOLERANCE };
                if improving {
                    if bland {
                        entering = Some(v);
                        break;
                    }
                    if d.abs() > best {
                        best = d.abs();
                        entering = Some(v);
                    }
                }
            }
            let Some(q) = entering else {
                return if phase_one { Phase::Infeasible } else { Phase::Done };
            };
            let sigma = if self.at_upper[q] { -1.0 } else { 1.0 };
            let alpha = self.ftran(q);

            let mut step = self.upper[q] - self.lower[q];
            let mut leave: Option<(usize, bool)> = None;
            let mut leave_size = 0.0;
            for i in 0..self.m {
                let delta = -sigma * alpha[i];
                if delta.abs() <= PIVOT_TOL {
                    continue;
                }
                let v = self.basic[i];
                let (x, l, u) = (self.xb[i], self.lower[v], self.upper[v]);
                let target = if delta > 0.0 {
                    if phase_one && x < l - LP_TOLERANCE {
                        Some((l, false))
                    } else if x <= u + LP_TOLERANCE && u.is_finite() {
                        Some((u, true))
                    } else {
                        None
                    }
                } else if phase_one && x > u + LP_TOLERANCE {
                    Some((u, true))
                } else if x >= l - LP_TOLERANCE && l.is_finite() {
                    Some((l, false))
                } else {
                    None
                };
                let Some((bound, to_upper)) = target else { continue };
                let ratio = ((bound - x) / delta).max(0.0);
                let better = match leave {
                    _ if ratio < step - TIE_TOL => true,
                    Some((j, _)) if ratio <= step + TIE_TOL => {
                        if bland {
                            v < self.basic[j]
                        } else {
                            delta.abs() > leave_size
                        }
                    }
                    _ => false,
                };
                if better {
                    step = ratio;
                    leave = Some((i, to_upper));
                    leave_size = delta.abs();
                }
            }
            if !step.is_finite() {
                return if phase_one { Phase::Failed } else { Phase::Unbounded };
            }
            bland = self.note_step(step);
            match leave {
                None => self.at_upper[q] = !self.at_upper[q],
                Some((r, to_upper)) => {
                    let p = self.basic[r];
                    self.at_upper[p] = to_upper;
                    self.pivot(q, r, &alpha);
                }
            }
        }
    }

    /// Dual simplex from a dual feasible basis.
    fn dual(&mut self) -> Phase {
        let mut bland = false;
        loop {
            if !self.tick() {
                return Phase::Failed;
            }
            let mut r = None;
            let mut worst = LP_TOLERANCE;
            for i in 0..self.m {
                let inf = self.infeasibility(i);
                if inf > worst && (!bland || r.is_none_or(|j: usize| self.basic[i] < self.basic[j])) {
                    if !bland {
                        worst = inf;
                    }
                    r = Some(i);
                }
            }
            let Some(r) = r else { return Phase::Done };
            let leaving = self.basic[r];
            let going_up = self.xb[r] < self.lower[leaving];

            let cb: Vec<f64> = self.basic.iter().map(|&v| self.cost[v]).collect();
            let y = self.duals(&cb);
            let rho = &self.binv[r * self.m..(r + 1) * self.m];
            let mut entering = None;
            let mut best_ratio = f64::INFINITY;
            let mut best_size = 0.0;
            for v in 0..self.n + self.m {
                if self.pos[v] != usize::MAX || self.lower[v] == self.upper[v] {
                    continue;
                }
                let a = self.dot_column(v, rho);
                let eligible = match (going_up, self.at_upper[v]) {
                    (true, false) | (false, true) => a < -PIVOT_TOL,
                    (true, true) | (false, false) => a > PIVOT_TOL,
                };
                if !eligible {
                    continue;
                }
                let d = self.cost[v] - self.dot_column(v, &y);
                let ratio = (d.abs() / a.abs()).max(0.0);
                let ratio = if (d < 0.0) != self.at_upper[v] && d != 0.0 { 0.0 } else { ratio };
                let better = ratio < best_ratio - TIE_TOL
                    || (ratio <= best_ratio + TIE_TOL && !bland && a.abs() > best_size);
                if better {
                    best_ratio = ratio;
                    best_size = a.abs();
                    entering = Some(v);
                }
            }
            let Some(q) = entering else { return Phase::Infeasible };
            let alpha = self.ftran(q);
            if alpha[r].abs() <= PIVOT_TOL {
                if !self.refactor() {
                    return Phase::Failed;
                }
                continue;
            }
            bland = self.note_step(best_ratio);
            self.at_upper[leaving] = !going_up;
            self.pivot(q, r, &alpha);
        }
    }

    fn run(&mut self, problem: &LpProblem, warm: bool) -> LpSolution {
        let status = self.optimize();
        let mut out = LpSolution {
            status,
            objective: 0.0,
            values: Vec::new(),
            basis: None,
            iterations: self.iterations,
            warm_started: warm,
        };
        if status != LpStatus::Optimal {
            return out;
        }
        if !self.refactor() {
            out.status = LpStatus::NumericalFailure;
            return out;
        }
        self.compute_xb();
        let mut values = Vec::with_capacity(self.n);
        for j in 0..self.n {
            let mut x = if self.pos[j] == usize::MAX { self.nonbasic_value(j) } else { self.xb[self.pos[j]] };
            if (x - self.lower[j]).abs() <= LP_TOLERANCE {
                x = self.lower[j];
            } else if (x - self.upper[j]).abs() <= LP_TOLERANCE {
                x = self.upper[j];
            }
            values.push(x);
        }
        if problem.max_violation(&values) > ACCEPT_TOL {
            out.status = LpStatus::NumericalFailure;
            return out;
        }
        out.objective = problem.objective(&values);
        out.values = values;
        out.basis = Some(Basis { columns: self.n, basic: self.basic.clone(), at_upper: self.at_upper.clone() });
        out
    }

    fn optimize(&mut self) -> LpStatus {
        if self.dual_feasible() {
            match self.dual() {
                Phase::Done => {}
                Phase::Infeasible => return LpStatus::Infeasible,
                _ => {
                    if !self.refactor() {
                        self.cold_start();
                    }
                }
            }
        }
        match self.primal(true) {
            Phase::Done => {}
            Phase::Infeasible => return LpStatus::Infeasible,
            _ => return LpStatus::NumericalFailure,
        }
        match self.primal(false) {
            Phase::Done => LpStatus::Optimal,
            Phase::Unbounded => LpStatus::Unbounded,
            _ => LpStatus::NumericalFailure,
        }
    }
}
