//! Jacobi-preconditioned conjugate gradients.

use std::fmt;

use super::sparse::CsrMatrix;
use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-12;

/// `10 · sqrt(dim)`, at least 1.
pub fn default_maxit(dim: usize) -> usize {
    ((10.0 * (dim as f64).sqrt()).ceil() as usize).max(1)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverReport {
    pub iterations: usize,
    /// Final `‖b - A x‖₂ / ‖b‖₂` (0 when `b = 0`).
    pub residual: f64,
    pub converged: bool,
}

impl fmt::Display for SolverReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} after {} iterations, relative residual {:e}",
            if self.converged {
                "converged"
            } else {
                "not converged"
            },
            self.iterations,
            self.residual
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CgOptions {
    pub tol: f64,
    /// `None` selects [`default_maxit`].
    pub maxit: Option<usize>,
}

impl Default for CgOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            maxit: None,
        }
    }
}

/// Solve `A x = b` from a zero initial guess.
pub fn cg_solve(
    a: &CsrMatrix,
    b: &[f64],
    tol: f64,
    maxit: usize,
) -> Result<(Vec<f64>, SolverReport)> {
    let mut x = vec![0.0; b.len()];
    let report = cg_solve_from(a, b, &mut x, tol, maxit)?;
    Ok((x, report))
}

/// Solve `A x = b` starting from the contents of `x`.
pub fn cg_solve_from(
    a: &CsrMatrix,
    b: &[f64],
    x: &mut [f64],
    tol: f64,
    maxit: usize,
) -> Result<SolverReport> {
    let n = b.len();
    if a.nrows() != n || a.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            got: n,
        });
    }
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x.len(),
        });
    }
    let bnorm = norm(b);
    if bnorm == 0.0 {
        x.iter_mut().for_each(|v| *v = 0.0);
        return Ok(SolverReport {
            iterations: 0,
            residual: 0.0,
            converged: true,
        });
    }
    let inv_diag: Vec<f64> = a
        .diagonal()
        .into_iter()
        .map(|d| if d != 0.0 { 1.0 / d } else { 1.0 })
        .collect();

    let target = tol * bnorm;
    let residual = |x: &[f64]| -> Vec<f64> {
        let ax = a.matvec(x);
        b.iter().zip(&ax).map(|(b, a)| b - a).collect()
    };
    let mut r = residual(x);
    let mut true_norm = norm(&r);
    let mut iterations = 0;
    let mut z = vec![0.0; n];
    let mut ap = vec![0.0; n];
    // restart from the true residual whenever the recurrence drifts below it
    while true_norm > target && iterations < maxit {
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let mut p = z.clone();
        let mut rz = dot(&r, &z);
        let mut breakdown = false;
        while iterations < maxit {
            iterations += 1;
            a.matvec_into(&p, &mut ap);
            let pap = dot(&p, &ap);
            if pap <= 0.0 {
                breakdown = true;
                break;
            }
            let alpha = rz / pap;
            for i in 0..n {
                x[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
            }
            if norm(&r) <= target {
                break;
            }
            for i in 0..n {
                z[i] = r[i] * inv_diag[i];
            }
            let rz_new = dot(&r, &z);
            let beta = rz_new / rz;
            rz = rz_new;
            for i in 0..n {
                p[i] = z[i] + beta * p[i];
            }
        }
        r = residual(x);
        true_norm = norm(&r);
        if breakdown {
            break;
        }
    }
    let report = SolverReport {
        iterations,
        residual: true_norm / bnorm,
        converged: true_norm <= target,
    };
    if report.converged {
        Ok(report)
    } else {
        Err(Error::NotConverged(report))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
