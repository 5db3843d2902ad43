//! Exact rational linear programming for the bound combiner: maximize c'x
//! subject to Ax <= b and 0 <= x <= 1.
//!
//! Primal simplex over rationals with Bland's anti-cycling rule. The box
//! bounds become ordinary rows of the standard form, so the all-slack basis
//! is feasible whenever b >= 0 and no phase-1 is ever needed. Every solve
//! also produces and checks a dual certificate, so optimality never rests on
//! the pivot path alone.

use crate::linalg::{dot, Mat, Rat};
use num_traits::{One, Zero};

#[derive(Debug, Clone)]
pub struct LpProblem {
    pub objective: Vec<Rat>,
    /// One row per inequality a'x <= rhs; box bounds are implicit.
    pub constraints: Mat,
    pub rhs: Vec<Rat>,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub value: Rat,
    pub point: Vec<Rat>,
    /// Indices of problem rows satisfied with equality at the optimum.
    pub tight: Vec<usize>,
    /// Nonnegative multipliers for the problem rows, then the box rows;
    /// together they certify the optimum from above.
    pub dual: Vec<Rat>,
}

#[derive(Debug, thiserror::Error)]
pub enum LpError {
    #[error("malformed problem: {0}")]
    Malformed(String),
    #[error("internal error: {0}")]
    Internal(String),
}

/// Exact optimum of the boxed LP. Deterministic: Bland's rule, smallest
/// indices first.
pub fn solve_max(p: &LpProblem) -> Result<LpSolution, LpError> {
    let n = p.objective.len();
    let m = p.constraints.rows();
    if p.constraints.cols() != n {
        return Err(LpError::Malformed(format!(
            "objective has {n} variables, constraint matrix has {} columns",
            p.constraints.cols()
        )));
    }
    if p.rhs.len() != m {
        return Err(LpError::Malformed(format!(
            "{m} constraint rows but {} right-hand sides",
            p.rhs.len()
        )));
    }
    if p.rhs.iter().any(|b| b < &Rat::zero()) {
        return Err(LpError::Malformed(
            "negative right-hand side; the origin must be feasible".into(),
        ));
    }

    // Standard form rows: the m problem rows, then n box rows x_i <= 1.
    let rows = m + n;
    let width = n + rows + 1; // structural vars, slacks, rhs
    let rhs_col = n + rows;
    let mut t: Vec<Vec<Rat>> = Vec::with_capacity(rows);
    for i in 0..m {
        let mut row = vec![Rat::zero(); width];
        row[..n].clone_from_slice(p.constraints.row(i));
        row[n + i] = Rat::one();
        row[rhs_col] = p.rhs[i].clone();
        t.push(row);
    }
    for i in 0..n {
        let mut row = vec![Rat::zero(); width];
        row[i] = Rat::one();
        row[n + m + i] = Rat::one();
        row[rhs_col] = Rat::one();
        t.push(row);
    }
    let mut cost = vec![Rat::zero(); width];
    cost[..n].clone_from_slice(&p.objective);
    let mut value = Rat::zero();
    let mut basis: Vec<usize> = (n..n + rows).collect();

    // Bland: the entering variable is the smallest index with positive
    // reduced cost; termination is guaranteed without perturbation.
    while let Some(enter) = (0..n + rows).find(|&j| cost[j] > Rat::zero()) {
        // Ratio test, ties broken toward the smallest basic variable index.
        let mut pick: Option<(usize, Rat)> = None;
        for (i, row) in t.iter().enumerate() {
            if row[enter] > Rat::zero() {
                let ratio = &row[rhs_col] / &row[enter];
                match &pick {
                    Some((best, r)) if *r < ratio => {}
                    Some((best, r)) if *r == ratio && basis[*best] < basis[i] => {}
                    _ => pick = Some((i, ratio)),
                }
            }
        }
        let Some((leave, ratio)) = pick else {
            // Unreachable: every variable is boxed above.
            return Err(LpError::Internal("unbounded boxed program".into()));
        };
        value += &cost[enter] * &ratio;
        let pivot = t[leave][enter].clone();
        for x in t[leave].iter_mut() {
            if !x.is_zero() {
                *x /= &pivot;
            }
        }
        let pivot_row = t[leave].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i == leave || row[enter].is_zero() {
                continue;
            }
            let f = row[enter].clone();
            for (x, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *x -= &f * pv;
                }
            }
        }
        if !cost[enter].is_zero() {
            let f = cost[enter].clone();
            for (x, pv) in cost.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *x -= &f * pv;
                }
            }
        }
        basis[leave] = enter;
    }

    let mut point = vec![Rat::zero(); n];
    for (i, &b) in basis.iter().enumerate() {
        if b < n {
            point[b] = t[i][rhs_col].clone();
        }
    }
    // Duals are the negated reduced costs of the slack columns.
    let dual: Vec<Rat> = (0..rows).map(|i| -cost[n + i].clone()).collect();

    audit(p, &point, &dual, &value)?;

    let tight = (0..m)
        .filter(|&i| dot(p.constraints.row(i), &point) == p.rhs[i])
        .collect();
    Ok(LpSolution {
        value,
        point,
        tight,
        dual,
    })
}

/// The certificate check: the point is feasible, the multipliers are
/// nonnegative, y'A dominates the objective coordinatewise, and both sides
/// meet at the claimed value.
fn audit(p: &LpProblem, point: &[Rat], dual: &[Rat], value: &Rat) -> Result<(), LpError> {
    let n = p.objective.len();
    let m = p.constraints.rows();
    for x in point {
        if x < &Rat::zero() || x > &Rat::one() {
            return Err(LpError::Internal("point escapes the box".into()));
        }
    }
    for i in 0..m {
        if dot(p.constraints.row(i), point) > p.rhs[i] {
            return Err(LpError::Internal(format!("row {} violated", i + 1)));
        }
    }
    if &dot(&p.objective, point) != value {
        return Err(LpError::Internal("objective mismatch at the point".into()));
    }
    if dual.iter().any(|y| y < &Rat::zero()) {
        return Err(LpError::Internal("negative dual multiplier".into()));
    }
    // y'A >= c columnwise, counting the box rows as unit rows.
    for j in 0..n {
        let mut lhs = Rat::zero();
        for (i, y) in dual.iter().enumerate().take(m) {
            let a = p.constraints.get(i, j);
            if !a.is_zero() {
                lhs += y * a;
            }
        }
        lhs += &dual[m + j];
        if lhs < p.objective[j] {
            return Err(LpError::Internal(format!(
                "dual does not dominate objective at column {}",
                j + 1
            )));
        }
    }
    // y'b == value closes the weak-duality sandwich.
    let mut yb = Rat::zero();
    for (y, b) in dual.iter().zip(&p.rhs) {
        if !y.is_zero() {
            yb += y * b;
        }
    }
    for j in 0..n {
        if !dual[m + j].is_zero() {
            yb += &dual[m + j];
        }
    }
    if &yb != value {
        return Err(LpError::Internal("dual value differs from primal".into()));
    }
    Ok(())
}

/// Render the problem in a plain-text tableau, for the debug dump flag.
pub fn format_tableau(p: &LpProblem) -> String {
    let n = p.objective.len();
    let mut out = String::new();
    out.push_str("maximize  ");
    for (j, c) in p.objective.iter().enumerate() {
        if j > 0 {
            out.push_str(" + ");
        }
        out.push_str(&format!("{c}*x{}", j + 1));
    }
    out.push('\n');
    out.push_str("subject to\n");
    for i in 0..p.constraints.rows() {
        out.push_str("  ");
        let mut first = true;
        for j in 0..n {
            let a = p.constraints.get(i, j);
            if a.is_zero() {
                continue;
            }
            if !first {
                out.push_str(" + ");
            }
            if a.is_one() {
                out.push_str(&format!("x{}", j + 1));
            } else {
                out.push_str(&format!("{a}*x{}", j + 1));
            }
            first = false;
        }
        if first {
            out.push('0');
        }
        out.push_str(&format!(" <= {}\n", p.rhs[i]));
    }
    out.push_str(&format!("  0 <= x_j <= 1 for j = 1..{n}\n"));
    out
}
