//! Dense primal simplex for the small linear programs the bound engines
//! generate (coefficient search over cutting planes, robustness oracles).
//!
//! Problem form: maximize `objective . x` subject to `A x <= b` with x
//! unrestricted in sign. Free variables are split into positive parts
//! internally. Every right-hand side must be nonnegative so that x = 0 is a
//! basic feasible start; the engines arrange their constraints that way
//! (box constraints and spectral cuts all have positive slack at zero).

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub value: f64,
}

const PIVOT_TOL: f64 = 1e-11;
const COST_TOL: f64 = 1e-9;
/// Dantzig pricing until this many pivots, then Bland's rule to rule out
/// cycling.
const DANTZIG_LIMIT: usize = 5_000;
const ITER_LIMIT: usize = 50_000;

/// Maximizes `objective . x` over `{x : row . x <= rhs for each constraint}`.
pub fn maximize(objective: &[f64], constraints: &[(Vec<f64>, f64)]) -> Result<LpSolution> {
    let n = objective.len();
    let m = constraints.len();
    for (row, rhs) in constraints {
        if row.len() != n {
            return Err(Error::Optimizer(format!(
                "constraint has {} coefficients, expected {n}",
                row.len()
            )));
        }
        if *rhs < 0.0 {
            return Err(Error::Optimizer(
                "constraint right-hand side is negative; origin must be feasible".into(),
            ));
        }
        if !rhs.is_finite() || row.iter().any(|v| !v.is_finite()) {
            return Err(Error::Optimizer("non-finite constraint data".into()));
        }
    }

    // Columns: u_0..u_{n-1}, w_0..w_{n-1} (x = u - w), then m slacks.
    let cols = 2 * n + m;
    let mut tableau: Vec<Vec<f64>> = Vec::with_capacity(m);
    for (i, (row, rhs)) in constraints.iter().enumerate() {
        let mut t = vec![0.0; cols + 1];
        for (j, &a) in row.iter().enumerate() {
            t[j] = a;
            t[n + j] = -a;
        }
        t[2 * n + i] = 1.0;
        t[cols] = *rhs;
        tableau.push(t);
    }
    let mut obj = vec![0.0; cols + 1];
    for (j, &c) in objective.iter().enumerate() {
        obj[j] = c;
        obj[n + j] = -c;
    }
    let mut basis: Vec<usize> = (0..m).map(|i| 2 * n + i).collect();

    for iter in 0..ITER_LIMIT {
        let entering = if iter < DANTZIG_LIMIT {
            let mut best = None;
            let mut best_cost = COST_TOL;
            for (j, &c) in obj[..cols].iter().enumerate() {
                if c > best_cost {
                    best_cost = c;
                    best = Some(j);
                }
            }
            best
        } else {
            obj[..cols].iter().position(|&c| c > COST_TOL)
        };
        let Some(e) = entering else {
            return Ok(extract(&tableau, &basis, &obj, n, cols));
        };

        let mut leave: Option<usize> = None;
        let mut best_ratio = f64::INFINITY;
        for (i, row) in tableau.iter().enumerate() {
            if row[e] > PIVOT_TOL {
                let ratio = row[cols] / row[e];
                // Ties resolved toward the smallest basis index (Bland).
                if ratio < best_ratio - 1e-12
                    || (ratio < best_ratio + 1e-12
                        && leave.map(|l| basis[i] < basis[l]).unwrap_or(false))
                {
                    best_ratio = ratio;
                    leave = Some(i);
                }
            }
        }
        let Some(l) = leave else {
            return Err(Error::Optimizer(
                "linear program is unbounded; missing box constraint".into(),
            ));
        };

        // Pivot on (l, e).
        let pivot = tableau[l][e];
        for v in tableau[l].iter_mut() {
            *v /= pivot;
        }
        let pivot_row = tableau[l].clone();
        for (i, row) in tableau.iter_mut().enumerate() {
            if i == l || row[e].abs() < 1e-300 {
                continue;
            }
            let factor = row[e];
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                *v -= factor * p;
            }
            row[e] = 0.0;
        }
        let factor = obj[e];
        for (v, p) in obj.iter_mut().zip(&pivot_row) {
            *v -= factor * p;
        }
        obj[e] = 0.0;
        basis[l] = e;
    }
    Err(Error::Optimizer(
        "simplex iteration limit reached".into(),
    ))
}

fn extract(tableau: &[Vec<f64>], basis: &[usize], obj: &[f64], n: usize, cols: usize) -> LpSolution {
    let mut values = vec![0.0; cols];
    for (i, &b) in basis.iter().enumerate() {
        values[b] = tableau[i][cols];
    }
    let x: Vec<f64> = (0..n).map(|j| values[j] - values[n + j]).collect();
    LpSolution {
        x,
        // obj[cols] accumulated -z through the pivots.
        value: -obj[cols],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_bounded_problem() {
        // max x + y, x <= 1, y <= 2, x + y <= 2.5
        let sol = maximize(
            &[1.0, 1.0],
            &[
                (vec![1.0, 0.0], 1.0),
                (vec![0.0, 1.0], 2.0),
                (vec![1.0, 1.0], 2.5),
            ],
        )
        .unwrap();
        assert!((sol.value - 2.5).abs() < 1e-9);
        assert!((sol.x[0] + sol.x[1] - 2.5).abs() < 1e-9);
    }

    #[test]
    fn free_variables_go_negative() {
        // max -x subject to -x <= 3  ->  x = -3.
        let sol = maximize(&[-1.0], &[(vec![-1.0], 3.0)]).unwrap();
        assert!((sol.value - 3.0).abs() < 1e-9);
        assert!((sol.x[0] + 3.0).abs() < 1e-9);
    }

    #[test]
    fn symmetric_box() {
        // max 2a - b over |a| <= 1, |b| <= 1 encoded as four rows.
        let sol = maximize(
            &[2.0, -1.0],
            &[
                (vec![1.0, 0.0], 1.0),
                (vec![-1.0, 0.0], 1.0),
                (vec![0.0, 1.0], 1.0),
                (vec![0.0, -1.0], 1.0),
            ],
        )
        .unwrap();
        assert!((sol.value - 3.0).abs() < 1e-9);
        assert!((sol.x[0] - 1.0).abs() < 1e-9);
        assert!((sol.x[1] + 1.0).abs() < 1e-9);
    }

    #[test]
    fn unbounded_is_an_error() {
        assert!(maximize(&[1.0], &[]).is_err());
        assert!(maximize(&[1.0, 0.0], &[(vec![0.0, 1.0], 1.0)]).is_err());
    }

    #[test]
    fn negative_rhs_is_rejected() {
        assert!(maximize(&[1.0], &[(vec![1.0], -0.5)]).is_err());
    }

    #[test]
    fn degenerate_ties_terminate() {
        // Several redundant constraints active at the optimum.
        let sol = maximize(
            &[1.0, 1.0],
            &[
                (vec![1.0, 1.0], 1.0),
                (vec![1.0, 1.0], 1.0),
                (vec![2.0, 2.0], 2.0),
                (vec![1.0, 0.0], 1.0),
                (vec![0.0, 1.0], 1.0),
            ],
        )
        .unwrap();
        assert!((sol.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn zero_objective() {
        let sol = maximize(&[0.0, 0.0], &[(vec![1.0, 1.0], 1.0)]).unwrap();
        assert_eq!(sol.value, 0.0);
    }
}
