//! Coefficient vectors bound to a function space.

use std::sync::Arc;

use super::space::FunctionSpace;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Field {
    space: Arc<FunctionSpace>,
    coeffs: Vec<f64>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        *self.space == *other.space && self.coeffs == other.coeffs
    }
}

impl Field {
    pub fn new(space: Arc<FunctionSpace>, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                got: coeffs.len(),
            });
        }
        Ok(Self { space, coeffs })
    }

    pub fn zeros(space: Arc<FunctionSpace>) -> Self {
        let n = space.dim();
        Self {
            space,
            coeffs: vec![0.0; n],
        }
    }

    pub fn space(&self) -> &Arc<FunctionSpace> {
        &self.space
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    fn local(&self, cell: usize) -> Vec<f64> {
        let mut l = vec![0.0; self.space.local_dim()];
        self.space.local_coefficients(cell, &self.coeffs, &mut l);
        l
    }

    /// Value of a scalar field at reference point `xi` of `cell`.
    pub fn eval_scalar(&self, cell: usize, xi: [f64; 2]) -> f64 {
        let basis = self.space.element().scalar_basis();
        self.local(cell)
            .iter()
            .zip(basis)
            .map(|(c, b)| c * b.eval(xi))
            .sum()
    }

    /// Physical gradient of a scalar field at reference point `xi`.
    pub fn eval_gradient(&self, cell: usize, xi: [f64; 2]) -> [f64; 2] {
        let basis = self.space.element().scalar_basis();
        let mut g = [0.0; 2];
        for (c, b) in self.local(cell).iter().zip(basis) {
            let d = b.grad(xi);
            g[0] += c * d[0];
            g[1] += c * d[1];
        }
        super::piola::covariant(self.space.mesh().geometry(cell), g)
    }

    /// Physical value of a vector field at reference point `xi`.
    pub fn eval_vector(&self, cell: usize, xi: [f64; 2]) -> [f64; 2] {
        let basis = self.space.element().vector_basis();
        let mut v = [0.0; 2];
        for (c, b) in self.local(cell).iter().zip(basis) {
            let d = b.eval(xi);
            v[0] += c * d[0];
            v[1] += c * d[1];
        }
        super::piola::contravariant(self.space.mesh().geometry(cell), v)
    }

    /// Physical divergence of a vector field at reference point `xi`.
    pub fn eval_divergence(&self, cell: usize, xi: [f64; 2]) -> f64 {
        let basis = self.space.element().vector_basis();
        let d: f64 = self
            .local(cell)
            .iter()
            .zip(basis)
            .map(|(c, b)| c * b.div(xi))
            .sum();
        d / self.space.mesh().geometry(cell).det
    }

    /// Reference coordinates of a physical point given in `cell`'s unwrapped frame.
    pub fn reference_point(&self, cell: usize, x: [f64; 2]) -> [f64; 2] {
        self.space.mesh().geometry(cell).inverse_map(x)
    }
}
