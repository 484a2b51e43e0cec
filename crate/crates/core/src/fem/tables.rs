//! Physical basis values at the quadrature points of every cell.
//!
//! Signs from the global DOF map are folded into the stored values, so a
//! field is evaluated as `sum_i coeff[dofs[i]] * value[i]`.

use super::piola::{contravariant, covariant};
use super::quadrature::QuadratureRule;
use super::space::FunctionSpace;

#[derive(Debug, Clone)]
pub struct CellTables {
    nq: usize,
    ndof: usize,
    vector: bool,
    points: Vec<[f64; 2]>,
    weights: Vec<f64>,
    /// `[cell][q][dof][component]`
    values: Vec<f64>,
    /// Scalar spaces: gradients `[cell][q][dof][2]`; vector spaces:
    /// divergences `[cell][q][dof]`.
    derivs: Vec<f64>,
}

impl CellTables {
    pub fn new(space: &FunctionSpace, rule: &QuadratureRule) -> Self {
        let mesh = space.mesh();
        let el = space.element();
        let nq = rule.len();
        let ndof = el.dim();
        let nc = mesh.num_cells();
        let vector = space.is_vector();
        let ncomp = if vector { 2 } else { 1 };
        let nder = if vector { 1 } else { 2 };
        let mut points = Vec::with_capacity(nc * nq);
        let mut weights = Vec::with_capacity(nc * nq);
        let mut values = Vec::with_capacity(nc * nq * ndof * ncomp);
        let mut derivs = Vec::with_capacity(nc * nq * ndof * nder);

        let scalar_ref = (!vector).then(|| el.tabulate_scalar(&rule.points));
        let vector_ref = vector.then(|| el.tabulate_vector(&rule.points));
        for c in 0..nc {
            let g = mesh.geometry(c);
            let signs = space.signs(c);
            for (q, (&p, &w)) in rule.points.iter().zip(&rule.weights).enumerate() {
                points.push(g.map(p));
                weights.push(w * g.det);
                if let Some(t) = &vector_ref {
                    for i in 0..ndof {
                        let v = contravariant(g, t.values[q][i]);
                        values.push(signs[i] * v[0]);
                        values.push(signs[i] * v[1]);
                        derivs.push(signs[i] * t.divs[q][i] / g.det);
                    }
                } else if let Some(t) = &scalar_ref {
                    for i in 0..ndof {
                        values.push(signs[i] * t.values[q][i]);
                        let gr = covariant(g, t.grads[q][i]);
                        derivs.push(signs[i] * gr[0]);
                        derivs.push(signs[i] * gr[1]);
                    }
                }
            }
        }
        Self {
            nq,
            ndof,
            vector,
            points,
            weights,
            values,
            derivs,
        }
    }

    pub fn num_points(&self) -> usize {
        self.nq
    }

    pub fn num_dofs(&self) -> usize {
        self.ndof
    }

    pub fn is_vector(&self) -> bool {
        self.vector
    }

    /// Physical (unwrapped) quadrature point.
    #[inline]
    pub fn point(&self, cell: usize, q: usize) -> [f64; 2] {
        self.points[cell * self.nq + q]
    }

    /// Quadrature weight including the cell Jacobian.
    #[inline]
    pub fn weight(&self, cell: usize, q: usize) -> f64 {
        self.weights[cell * self.nq + q]
    }

    /// Scalar basis values at one point (`ndof` entries).
    #[inline]
    pub fn scalar(&self, cell: usize, q: usize) -> &[f64] {
        debug_assert!(!self.vector);
        let o = (cell * self.nq + q) * self.ndof;
        &self.values[o..o + self.ndof]
    }

    /// Scalar basis gradients at one point (`2 * ndof` entries, interleaved).
    #[inline]
    pub fn grads(&self, cell: usize, q: usize) -> &[f64] {
        debug_assert!(!self.vector);
        let o = (cell * self.nq + q) * self.ndof * 2;
        &self.derivs[o..o + 2 * self.ndof]
    }

    /// Vector basis values at one point (`2 * ndof` entries, interleaved).
    #[inline]
    pub fn vectors(&self, cell: usize, q: usize) -> &[f64] {
        debug_assert!(self.vector);
        let o = (cell * self.nq + q) * self.ndof * 2;
        &self.values[o..o + 2 * self.ndof]
    }

    /// Vector basis divergences at one point (`ndof` entries).
    #[inline]
    pub fn divs(&self, cell: usize, q: usize) -> &[f64] {
        debug_assert!(self.vector);
        let o = (cell * self.nq + q) * self.ndof;
        &self.derivs[o..o + self.ndof]
    }

    #[inline]
    pub fn eval_scalar(&self, cell: usize, q: usize, local: &[f64]) -> f64 {
        dot(self.scalar(cell, q), local)
    }

    #[inline]
    pub fn eval_grad(&self, cell: usize, q: usize, local: &[f64]) -> [f64; 2] {
        pair_dot(self.grads(cell, q), local)
    }

    #[inline]
    pub fn eval_vector(&self, cell: usize, q: usize, local: &[f64]) -> [f64; 2] {
        pair_dot(self.vectors(cell, q), local)
    }

    #[inline]
    pub fn eval_div(&self, cell: usize, q: usize, local: &[f64]) -> f64 {
        dot(self.divs(cell, q), local)
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
fn pair_dot(a: &[f64], b: &[f64]) -> [f64; 2] {
    let mut out = [0.0; 2];
    for (i, &c) in b.iter().enumerate() {
        out[0] += a[2 * i] * c;
        out[1] += a[2 * i + 1] * c;
    }
    out
}

/// Unsigned gather of a cell's global coefficients (tables carry the signs).
#[inline]
pub fn gather(space: &FunctionSpace, cell: usize, global: &[f64], out: &mut [f64]) {
    for (o, &d) in out.iter_mut().zip(space.dofs(cell)) {
        *o = global[d];
    }
}
