//! A small dense two-phase simplex solver for equality-form linear programs:
//! minimize `c.x` subject to `A x = b`, `x >= 0`.
//!
//! The local-polytope membership and critical-visibility programs solved here
//! are heavily degenerate (vertex columns are +-1 patterns), so pivoting uses
//! Dantzig pricing with lowest-index tie-breaks and falls back to Bland's
//! rule after a fixed number of iterations to guarantee termination. All
//! arithmetic is sequential and input-ordered, so identical inputs give
//! bit-identical results.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpError {
    #[error("simplex iteration limit reached")]
    IterationLimit,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("dimension mismatch between matrix, rhs and costs")]
    Shape,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Primal values for the structural variables (empty when infeasible).
    pub x: Vec<f64>,
    pub objective: f64,
}

/// Tolerance below which a phase-one objective counts as feasible.
pub const FEASIBILITY_TOL: f64 = 1e-8;
/// Pivot elements smaller than this are treated as zero.
const PIVOT_TOL: f64 = 1e-9;
/// Reduced costs above `-COST_TOL` count as optimal.
const COST_TOL: f64 = 1e-9;

/// Minimizes `c.x` s.t. `A x = b`, `x >= 0`, with `A` given row-major.
pub fn solve_equality_form(
    n_rows: usize,
    n_cols: usize,
    a: &[f64],
    b: &[f64],
    c: &[f64],
) -> Result<LpSolution, LpError> {
    if a.len() != n_rows * n_cols || b.len() != n_rows || c.len() != n_cols {
        return Err(LpError::Shape);
    }
    let width = n_cols + n_rows + 1; // structural + artificial + rhs
    let rhs = width - 1;
    let mut t = vec![0.0f64; (n_rows + 1) * width];
    let mut basis = vec![0usize; n_rows];
    let mut alive = vec![true; n_rows];

    for i in 0..n_rows {
        let flip = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n_cols {
            t[i * width + j] = flip * a[i * n_cols + j];
        }
        t[i * width + n_cols + i] = 1.0;
        t[i * width + rhs] = flip * b[i];
        basis[i] = n_cols + i;
    }
    // Phase-one objective row: minimize the sum of artificials.
    for j in 0..width {
        if j >= n_cols && j < rhs {
            continue;
        }
        let mut s = 0.0;
        for i in 0..n_rows {
            s -= t[i * width + j];
        }
        t[n_rows * width + j] = s;
    }

    let max_iter = 400 + 60 * (n_rows + n_cols);
    let bland_after = 100 + 20 * (n_rows + n_cols);

    iterate(
        &mut t,
        &mut basis,
        &alive,
        n_rows,
        width,
        n_cols + n_rows, // artificials may move during phase one
        max_iter,
        bland_after,
    )?;

    let phase1 = -t[n_rows * width + rhs];
    if phase1 > FEASIBILITY_TOL {
        return Ok(LpSolution {
            status: LpStatus::Infeasible,
            x: Vec::new(),
            objective: phase1,
        });
    }

    // Drive artificials out of the basis; rows that cannot be pivoted are
    // linearly dependent and get retired.
    for i in 0..n_rows {
        if basis[i] < n_cols {
            continue;
        }
        let mut entering = None;
        for j in 0..n_cols {
            if t[i * width + j].abs() > PIVOT_TOL {
                entering = Some(j);
                break;
            }
        }
        match entering {
            Some(j) => pivot(&mut t, &mut basis, n_rows, width, i, j),
            None => alive[i] = false,
        }
    }

    // Phase two: rebuild the objective row from the real costs.
    for j in 0..width {
        t[n_rows * width + j] = if j < n_cols { c[j] } else { 0.0 };
    }
    for i in 0..n_rows {
        if !alive[i] {
            continue;
        }
        let cost = t[n_rows * width + basis[i]];
        if cost != 0.0 {
            for j in 0..width {
                t[n_rows * width + j] -= cost * t[i * width + j];
            }
        }
    }

    iterate(
        &mut t,
        &mut basis,
        &alive,
        n_rows,
        width,
        n_cols, // artificials are banned from re-entering
        max_iter,
        bland_after,
    )?;

    let mut x = vec![0.0f64; n_cols];
    for i in 0..n_rows {
        if alive[i] && basis[i] < n_cols {
            x[basis[i]] = t[i * width + rhs].max(0.0);
        }
    }
    let objective = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
    Ok(LpSolution {
        status: LpStatus::Optimal,
        x,
        objective,
    })
}

#[allow(clippy::too_many_arguments)]
fn iterate(
    t: &mut [f64],
    basis: &mut [usize],
    alive: &[bool],
    n_rows: usize,
    width: usize,
    n_enterable: usize,
    max_iter: usize,
    bland_after: usize,
) -> Result<(), LpError> {
    let rhs = width - 1;
    for iter in 0..max_iter {
        let bland = iter >= bland_after;
        let obj_row = n_rows * width;

        let mut entering = None;
        if bland {
            for j in 0..n_enterable {
                if t[obj_row + j] < -COST_TOL {
                    entering = Some(j);
                    break;
                }
            }
        } else {
            let mut best = -COST_TOL;
            for j in 0..n_enterable {
                let r = t[obj_row + j];
                if r < best {
                    best = r;
                    entering = Some(j);
                }
            }
        }
        let Some(col) = entering else {
            return Ok(());
        };

        let mut leaving: Option<(usize, f64)> = None;
        for i in 0..n_rows {
            if !alive[i] {
                continue;
            }
            let aij = t[i * width + col];
            if aij > PIVOT_TOL {
                let ratio = t[i * width + rhs] / aij;
                let better = match leaving {
                    None => true,
                    Some((li, lr)) => {
                        ratio < lr - 1e-12 || (ratio < lr + 1e-12 && basis[i] < basis[li])
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
        }
        let Some((row, _)) = leaving else {
            return Err(LpError::Unbounded);
        };
        pivot(t, basis, n_rows, width, row, col);
    }
    Err(LpError::IterationLimit)
}

fn pivot(t: &mut [f64], basis: &mut [usize], n_rows: usize, width: usize, row: usize, col: usize) {
    let p = t[row * width + col];
    debug_assert!(p.abs() > 0.0);
    let inv = 1.0 / p;
    for j in 0..width {
        t[row * width + j] *= inv;
    }
    t[row * width + col] = 1.0;
    for i in 0..=n_rows {
        if i == row {
            continue;
        }
        let factor = t[i * width + col];
        if factor != 0.0 {
            for j in 0..width {
                t[i * width + j] -= factor * t[row * width + j];
            }
            t[i * width + col] = 0.0;
        }
    }
    basis[row] = col;
}
