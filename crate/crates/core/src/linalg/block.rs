//! Direct solves for block-diagonal matrices (DG mass matrices).

use nalgebra::DMatrix;

use super::sparse::CsrMatrix;
use crate::error::{Error, Result};

/// Pre-inverted contiguous diagonal blocks of a fixed size.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockDiagonalSolver {
    block: usize,
    inverses: Vec<f64>,
}

impl BlockDiagonalSolver {
    pub fn new(a: &CsrMatrix, block: usize) -> Result<Self> {
        let n = a.nrows();
        if block == 0 || a.ncols() != n || !n.is_multiple_of(block) {
            return Err(Error::InvalidArgument(format!(
                "{}x{} matrix cannot be split into blocks of size {block}",
                a.nrows(),
                a.ncols()
            )));
        }
        for r in 0..n {
            for (c, v) in a.row(r) {
                if r / block != c / block && v != 0.0 {
                    return Err(Error::NotBlockDiagonal {
                        row: r,
                        col: c,
                        block_size: block,
                    });
                }
            }
        }
        let nb = n / block;
        let mut inverses = Vec::with_capacity(n * block);
        for k in 0..nb {
            let o = k * block;
            let m = DMatrix::from_fn(block, block, |i, j| a.get(o + i, o + j));
            let scale = m.amax();
            let inv = m
                .clone()
                .try_inverse()
                .filter(|_| {
                    scale > 0.0 && m.determinant().abs() > f64::EPSILON * scale.powi(block as i32)
                })
                .ok_or(Error::SingularBlock { block: k })?;
            for i in 0..block {
                for j in 0..block {
                    inverses.push(inv[(i, j)]);
                }
            }
        }
        Ok(Self { block, inverses })
    }

    pub fn block_size(&self) -> usize {
        self.block
    }

    pub fn dim(&self) -> usize {
        self.inverses.len() / self.block
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let mut x = vec![0.0; b.len()];
        self.solve_into(b, &mut x)?;
        Ok(x)
    }

    pub fn solve_into(&self, b: &[f64], x: &mut [f64]) -> Result<()> {
        let n = self.dim();
        if b.len() != n || x.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: b.len().min(x.len()),
            });
        }
        let bs = self.block;
        for k in 0..n / bs {
            let inv = &self.inverses[k * bs * bs..(k + 1) * bs * bs];
            let bb = &b[k * bs..(k + 1) * bs];
            for i in 0..bs {
                x[k * bs + i] = (0..bs).map(|j| inv[i * bs + j] * bb[j]).sum();
            }
        }
        Ok(())
    }
}

/// One-shot block-diagonal solve.
pub fn block_diag_solve(a: &CsrMatrix, block: usize, b: &[f64]) -> Result<Vec<f64>> {
    BlockDiagonalSolver::new(a, block)?.solve(b)
}
