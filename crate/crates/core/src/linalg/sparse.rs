//! Compressed sparse row matrices.

use std::collections::BTreeMap;

/// How repeated `(row, col)` entries combine when building from triplets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Duplicates {
    Sum,
    /// Keep the first value; later ones must agree with it.
    KeepFirst,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
    symmetric: bool,
}

impl CsrMatrix {
    /// Build from raw CSR arrays. Column indices must be sorted within rows.
    pub fn from_raw(
        nrows: usize,
        ncols: usize,
        row_ptr: Vec<usize>,
        col_idx: Vec<usize>,
        values: Vec<f64>,
    ) -> Self {
        assert_eq!(row_ptr.len(), nrows + 1);
        assert_eq!(col_idx.len(), values.len());
        assert_eq!(*row_ptr.last().unwrap(), values.len());
        debug_assert!(col_idx.iter().all(|&c| c < ncols));
        Self {
            nrows,
            ncols,
            row_ptr,
            col_idx,
            values,
            symmetric: false,
        }
    }

    /// Build from `(row, col, value)` triplets; exact zeros are dropped.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: &[(usize, usize, f64)],
        dup: Duplicates,
    ) -> Self {
        let mut map: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for &(r, c, v) in triplets {
            assert!(
                r < nrows && c < ncols,
                "triplet ({r}, {c}) outside {nrows}x{ncols}"
            );
            match dup {
                Duplicates::Sum => *map.entry((r, c)).or_insert(0.0) += v,
                Duplicates::KeepFirst => {
                    map.entry((r, c)).or_insert(v);
                }
            }
        }
        let mut row_ptr = vec![0; nrows + 1];
        let mut col_idx = Vec::with_capacity(map.len());
        let mut values = Vec::with_capacity(map.len());
        for (&(r, c), &v) in &map {
            if v != 0.0 {
                row_ptr[r + 1] += 1;
                col_idx.push(c);
                values.push(v);
            }
        }
        for r in 0..nrows {
            row_ptr[r + 1] += row_ptr[r];
        }
        Self::from_raw(nrows, ncols, row_ptr, col_idx, values)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagonal(&vec![1.0; n])
    }

    pub fn from_diagonal(d: &[f64]) -> Self {
        let n = d.len();
        let mut m = Self::from_raw(n, n, (0..=n).collect(), (0..n).collect(), d.to_vec());
        m.symmetric = true;
        m
    }

    /// Dense row-major input; exact zeros are dropped.
    pub fn from_dense(rows: &[Vec<f64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut t = Vec::new();
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), ncols, "ragged dense input");
            for (c, &v) in row.iter().enumerate() {
                t.push((r, c, v));
            }
        }
        Self::from_triplets(nrows, ncols, &t, Duplicates::Sum)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn set_symmetric(&mut self, flag: bool) {
        self.symmetric = flag;
    }

    /// `(col, value)` pairs of one row.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.col_idx[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        match self.col_idx[span.clone()].binary_search(&c) {
            Ok(k) => self.values[span.start + k],
            Err(_) => 0.0,
        }
    }

    /// Position of entry `(r, c)` in the value array, if stored.
    pub fn position(&self, r: usize, c: usize) -> Option<usize> {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.col_idx[span.clone()]
            .binary_search(&c)
            .ok()
            .map(|k| span.start + k)
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.nrows.min(self.ncols))
            .map(|i| self.get(i, i))
            .collect()
    }

    /// `y = A x`
    pub fn matvec_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.ncols);
        assert_eq!(y.len(), self.nrows);
        for (r, yr) in y.iter_mut().enumerate() {
            let mut s = 0.0;
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                s += self.values[k] * x[self.col_idx[k]];
            }
            *yr = s;
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.nrows];
        self.matvec_into(x, &mut y);
        y
    }

    /// `y = Aᵀ x`
    pub fn transpose_matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.nrows);
        let mut y = vec![0.0; self.ncols];
        for (r, &xr) in x.iter().enumerate() {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                y[self.col_idx[k]] += self.values[k] * xr;
            }
        }
        y
    }

    pub fn transpose(&self) -> Self {
        let mut t = Vec::with_capacity(self.nnz());
        for r in 0..self.nrows {
            for (c, v) in self.row(r) {
                t.push((c, r, v));
            }
        }
        let mut m = Self::from_triplets(self.ncols, self.nrows, &t, Duplicates::Sum);
        m.symmetric = self.symmetric;
        m
    }

    /// Sparse product `A B`.
    pub fn matmul(&self, other: &CsrMatrix) -> Self {
        assert_eq!(self.ncols, other.nrows, "inner dimensions differ");
        let mut t = Vec::new();
        let mut acc: BTreeMap<usize, f64> = BTreeMap::new();
        for r in 0..self.nrows {
            acc.clear();
            for (k, a) in self.row(r) {
                for (c, b) in other.row(k) {
                    *acc.entry(c).or_insert(0.0) += a * b;
                }
            }
            t.extend(acc.iter().map(|(&c, &v)| (r, c, v)));
        }
        Self::from_triplets(self.nrows, other.ncols, &t, Duplicates::Sum)
    }

    pub fn scale(&mut self, s: f64) {
        for v in &mut self.values {
            *v *= s;
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `max |A - Aᵀ|` over all entries.
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..self.nrows {
            for (c, v) in self.row(r) {
                worst = worst.max((v - self.get(c, r)).abs());
            }
        }
        worst
    }

    /// Remove stored entries that are exactly zero.
    pub fn drop_zeros(&mut self) {
        let mut row_ptr = vec![0; self.nrows + 1];
        let mut col_idx = Vec::with_capacity(self.nnz());
        let mut values = Vec::with_capacity(self.nnz());
        for r in 0..self.nrows {
            for (c, v) in self.row(r) {
                if v != 0.0 {
                    col_idx.push(c);
                    values.push(v);
                }
            }
            row_ptr[r + 1] = values.len();
        }
        self.row_ptr = row_ptr;
        self.col_idx = col_idx;
        self.values = values;
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.ncols]; self.nrows];
        for (r, row) in d.iter_mut().enumerate() {
            for (c, v) in self.row(r) {
                row[c] = v;
            }
        }
        d
    }
}

/// Sparsity pattern of a cell-by-cell assembled operator together with the
/// value-array position of every local entry.
#[derive(Debug, Clone)]
pub struct CellScatter {
    rows_per_cell: usize,
    cols_per_cell: usize,
    positions: Vec<usize>,
}

impl CellScatter {
    /// Build a zero-valued matrix whose pattern covers every local block
    /// `rows(c) × cols(c)`.
    pub fn build<'a>(
        nrows: usize,
        ncols: usize,
        ncells: usize,
        rows: impl Fn(usize) -> &'a [usize],
        cols: impl Fn(usize) -> &'a [usize],
    ) -> (CsrMatrix, Self) {
        let mut per_row: Vec<Vec<usize>> = vec![Vec::new(); nrows];
        let (mut rpc, mut cpc) = (0, 0);
        for c in 0..ncells {
            let (rs, cs) = (rows(c), cols(c));
            rpc = rs.len();
            cpc = cs.len();
            for &r in rs {
                per_row[r].extend_from_slice(cs);
            }
        }
        let mut row_ptr = Vec::with_capacity(nrows + 1);
        row_ptr.push(0);
        let mut col_idx = Vec::new();
        for list in &mut per_row {
            list.sort_unstable();
            list.dedup();
            col_idx.extend_from_slice(list);
            row_ptr.push(col_idx.len());
        }
        let nnz = col_idx.len();
        let m = CsrMatrix::from_raw(nrows, ncols, row_ptr, col_idx, vec![0.0; nnz]);
        let mut positions = Vec::with_capacity(ncells * rpc * cpc);
        for c in 0..ncells {
            for &r in rows(c) {
                for &col in cols(c) {
                    positions.push(m.position(r, col).expect("entry is in the pattern"));
                }
            }
        }
        (
            m,
            Self {
                rows_per_cell: rpc,
                cols_per_cell: cpc,
                positions,
            },
        )
    }

    /// Value-array positions of cell `c`'s local block, row-major.
    pub fn positions(&self, cell: usize) -> &[usize] {
        let n = self.rows_per_cell * self.cols_per_cell;
        &self.positions[cell * n..(cell + 1) * n]
    }

    /// Add a row-major local block into the matrix values.
    pub fn add(&self, matrix: &mut CsrMatrix, cell: usize, local: &[f64]) {
        let vals = matrix.values_mut();
        for (&p, &v) in self.positions(cell).iter().zip(local) {
            vals[p] += v;
        }
    }
}
