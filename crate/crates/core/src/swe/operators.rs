//! Strong derivative operators between the spaces of a compatible triple.

use crate::fem::FunctionSpace;
use crate::linalg::{CsrMatrix, Duplicates};

pub use crate::fem::assemble_mass;

/// Largest denominator tried when cleaning reference entries.
const MAX_DENOMINATOR: i64 = 64;
const SNAP_TOL: f64 = 1e-11;

/// Reference entries are small rationals polluted by round-off from the
/// basis construction; snapping them keeps `D C` at round-off after the
/// `1/det` scaling.
fn snap(v: f64) -> f64 {
    for q in 1..=MAX_DENOMINATOR {
        let p = (v * q as f64).round();
        let r = p / q as f64;
        if (v - r).abs() <= SNAP_TOL * v.abs().max(1.0) {
            return r;
        }
    }
    v
}

/// `D`: S coefficients to the V coefficients of the divergence.
///
/// The divergence of an S field lies in V, so each row is the V degree of
/// freedom applied to the mapped divergence of the S basis.
pub fn assemble_div(s: &FunctionSpace, v: &FunctionSpace) -> CsrMatrix {
    let mesh = s.mesh();
    let sbasis = s.element().vector_basis();
    let vel = v.element();
    // reference divergences sampled by the V functionals: [vdof][sdof]
    let local: Vec<Vec<f64>> = {
        let per_basis: Vec<Vec<f64>> = sbasis
            .iter()
            .map(|b| vel.interpolate_scalar(|p| b.div(p)))
            .collect();
        (0..vel.dim())
            .map(|j| per_basis.iter().map(|col| snap(col[j])).collect())
            .collect()
    };
    let mut t = Vec::new();
    for c in 0..mesh.num_cells() {
        let det = mesh.geometry(c).det;
        let (sd, ss) = (s.dofs(c), s.signs(c));
        for (j, &vd) in v.dofs(c).iter().enumerate() {
            for i in 0..sd.len() {
                if local[j][i] != 0.0 {
                    t.push((vd, sd[i], ss[i] * local[j][i] / det));
                }
            }
        }
    }
    CsrMatrix::from_triplets(v.dim(), s.dim(), &t, Duplicates::Sum)
}

/// `C`: E coefficients of `γ` to the S coefficients of `∇⊥γ = (-∂y γ, ∂x γ)`.
///
/// Under the Piola map `∇⊥` commutes with the reference rotation, so every
/// cell uses the same reference matrix up to the S signs.
pub fn assemble_perp_grad_embedding(e: &FunctionSpace, s: &FunctionSpace) -> CsrMatrix {
    let mesh = e.mesh();
    let ebasis = e.element().scalar_basis();
    let sel = s.element();
    let per_basis: Vec<Vec<f64>> = ebasis
        .iter()
        .map(|b| {
            let (dx, dy) = (b.dx(), b.dy());
            sel.interpolate_vector(|p| [-dy.eval(p), dx.eval(p)])
        })
        .collect();
    let mut t = Vec::new();
    for c in 0..mesh.num_cells() {
        let (sd, ss) = (s.dofs(c), s.signs(c));
        for (j, &ed) in e.dofs(c).iter().enumerate() {
            for i in 0..sd.len() {
                let v = snap(per_basis[j][i]);
                t.push((sd[i], ed, ss[i] * v));
            }
        }
    }
    // shared S functionals see identical values from both cells
    CsrMatrix::from_triplets(s.dim(), e.dim(), &t, Duplicates::KeepFirst)
}
