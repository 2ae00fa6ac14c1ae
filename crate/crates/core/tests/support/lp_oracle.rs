use steiner_core::lp::{LpProblem, Relation};

/// Optimum of a problem whose feasible set is pointed and whose objective is
/// bounded, by trying every basis of active constraints. `None` if infeasible.
pub fn vertex_optimum(p: &LpProblem) -> Option<f64> {
    let n = p.num_columns();
    // Each candidate constraint as (coefficients, rhs).
    let mut planes: Vec<(Vec<f64>, f64)> = Vec::new();
    for (j, c) in p.columns().iter().enumerate() {
        let mut a = vec![0.0; n];
        a[j] = 1.0;
        planes.push((a.clone(), c.lower));
        if c.upper.is_finite() {
            planes.push((a, c.upper));
        }
    }
    for r in p.rows() {
        let mut a = vec![0.0; n];
        for &(j, v) in &r.coefs {
            a[j] = v;
        }
        planes.push((a, r.rhs));
    }
    let mut best: Option<f64> = None;
    let mut chosen = Vec::with_capacity(n);
    subsets(planes.len(), n, 0, &mut chosen, &mut |idx| {
        let Some(x) = solve_square(idx.iter().map(|&i| &planes[i]).collect()) else { return };
        if p.max_violation(&x) <= 1e-7 {
            let z = p.objective(&x);
            if best.is_none_or(|b| z < b) {
                best = Some(z);
            }
        }
    });
    best
}

fn subsets(total: usize, k: usize, start: usize, chosen: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if chosen.len() == k {
        f(chosen);
        return;
    }
    for i in start..total {
        chosen.push(i);
        subsets(total, k, i + 1, chosen, f);
        chosen.pop();
    }
}

fn solve_square(planes: Vec<&(Vec<f64>, f64)>) -> Option<Vec<f64>> {
    let n = planes.len();
    let mut m: Vec<Vec<f64>> = planes.iter().map(|(a, b)| a.iter().copied().chain([*b]).collect()).collect();
    for c in 0..n {
        let p = (c..n).max_by(|&x, &y| m[x][c].abs().total_cmp(&m[y][c].abs()))?;
        if m[p][c].abs() < 1e-9 {
            return None;
        }
        m.swap(p, c);
        for r in 0..n {
            if r != c {
                let f = m[r][c] / m[c][c];
                for k in c..=n {
                    m[r][k] -= f * m[c][k];
                }
            }
        }
    }
    Some((0..n).map(|i| m[i][n] / m[i][i]).collect())
}

/// Relation from a small integer, for generated rows.
pub fn relation(code: u8) -> Relation {
    match code % 3 {
        0 => Relation::Ge,
        1 => Relation::Le,
        _ => Relation::Eq,
    }
}
