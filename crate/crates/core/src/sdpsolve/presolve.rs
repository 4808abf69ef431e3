//! Equality-row reduction ahead of the interior-point iteration.
//!
//! Rows are flattened into real vectors (block entries split into real and
//! imaginary parts, followed by free coefficients) and brought to row
//! echelon form with partial pivoting, tracking the elimination
//! combination. Dependent consistent rows are dropped (their dual
//! multipliers are reported as 0); a dependent row with a nonzero residual
//! right-hand side yields an algebraic Farkas ray before any iteration runs.

use super::ConicProgram;

pub(crate) struct Reduction {
    /// Indices of retained (independent) rows, in original order.
    pub kept: Vec<usize>,
    /// Farkas combination proving inconsistency, normalized to `b'y = 1`.
    pub certificate: Option<Vec<f64>>,
}

/// Memory guard (cells) and work guard (multiply-adds); presolve is dense.
const MAX_CELLS: usize = 8_000_000;
const MAX_WORK: usize = 200_000_000;

pub(crate) fn reduce(q: &ConicProgram) -> Reduction {
    let m = q.constraints.len();
    let all: Vec<usize> = (0..m).collect();
    if m == 0 {
        return Reduction { kept: all, certificate: None };
    }
    let dim: usize = q.blocks.iter().map(|&d| 2 * d * d).sum::<usize>() + q.num_free();
    if m.saturating_mul(dim + 1) > MAX_CELLS
        || m.saturating_mul(m).saturating_mul(dim + 1) > MAX_WORK
    {
        return Reduction { kept: all, certificate: None };
    }

    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut rhs: Vec<f64> = Vec::with_capacity(m);
    let mut scale: Vec<f64> = Vec::with_capacity(m);
    for row in &q.constraints {
        let mut v = Vec::with_capacity(dim);
        for mat in &row.mats {
            for z in mat.iter() {
                v.push(z.re);
                v.push(z.im);
            }
        }
        v.extend_from_slice(&row.free_coeffs);
        let s = v
            .iter()
            .map(|x| x.abs())
            .fold(row.rhs.abs(), f64::max)
            .max(1e-300);
        for x in &mut v {
            *x /= s;
        }
        rows.push(v);
        rhs.push(row.rhs / s);
        scale.push(s);
    }

    // t[i]: combination of original scaled rows currently forming row i.
    let mut t: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            let mut e = vec![0.0; m];
            e[i] = 1.0;
            e
        })
        .collect();

    let tol = 1e-11;
    let mut kept: Vec<usize> = Vec::new();
    let mut active: Vec<usize> = (0..m).collect();
    for col in 0..dim {
        if active.is_empty() {
            break;
        }
        let (pos, pivot_row) = {
            let mut best = (0usize, active[0]);
            let mut best_val = rows[active[0]][col].abs();
            for (k, &r) in active.iter().enumerate().skip(1) {
                let v = rows[r][col].abs();
                if v > best_val {
                    best_val = v;
                    best = (k, r);
                }
            }
            best
        };
        if rows[pivot_row][col].abs() <= tol {
            continue;
        }
        kept.push(pivot_row);
        active.remove(pos);
        let piv = rows[pivot_row][col];
        let prow = rows[pivot_row].clone();
        let ptrans = t[pivot_row].clone();
        let prhs = rhs[pivot_row];
        for &r in &active {
            let f = rows[r][col] / piv;
            if f == 0.0 {
                continue;
            }
            for k in col..dim {
                rows[r][k] -= f * prow[k];
            }
            rhs[r] -= f * prhs;
            for k in 0..m {
                t[r][k] -= f * ptrans[k];
            }
        }
    }

    // Remaining active rows are (numerically) zero combinations.
    for &r in &active {
        let resid = rows[r].iter().map(|x| x.abs()).fold(0.0_f64, f64::max);
        if resid > 100.0 * tol {
            // Not dependent at this tolerance after all; keep it.
            kept.push(r);
            continue;
        }
        if rhs[r].abs() > 1e-9 {
            // 0 = nonzero: inconsistent. Express the combination against the
            // original (unscaled) rows and normalize to b'y = 1.
            let mut y: Vec<f64> = (0..m).map(|j| t[r][j] / scale[j]).collect();
            let by: f64 = q
                .constraints
                .iter()
                .zip(&y)
                .map(|(row, &yi)| row.rhs * yi)
                .sum();
            if by.abs() > 1e-300 {
                for v in &mut y {
                    *v /= by;
                }
                return Reduction {
                    kept: sorted(kept),
                    certificate: Some(y),
                };
            }
        }
    }
    Reduction {
        kept: sorted(kept),
        certificate: None,
    }
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}
