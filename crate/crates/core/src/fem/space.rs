//! Global function spaces: a mesh, a reference element and a signed DOF map.
//!
//! Global numbering puts shared vertex DOFs first, then shared edge DOFs,
//! then cell-local DOFs. Edge normal moments of order `k` pick up the sign
//! `s · r^k`, where `s` is the mesh's outward/global normal sign and `r = -1`
//! when the local edge parameter runs against the global edge direction.
//! Edge point values (P3) are permuted instead of signed.

use std::sync::Arc;

use super::element::{ElementKind, Entity, FunctionalKind, ReferenceElement};
use crate::mesh::Mesh;

#[derive(Debug, Clone)]
pub struct FunctionSpace {
    mesh: Arc<Mesh>,
    element: Arc<ReferenceElement>,
    dim: usize,
    local_dim: usize,
    cell_dofs: Vec<usize>,
    cell_signs: Vec<f64>,
}

impl PartialEq for FunctionSpace {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.mesh, &other.mesh) && self.element.kind() == other.element.kind()
    }
}

impl FunctionSpace {
    pub fn new(mesh: Arc<Mesh>, kind: ElementKind) -> Self {
        let element = Arc::new(ReferenceElement::new(kind));
        let dofs = element.dofs();
        let count = |pred: &dyn Fn(&Entity) -> bool| {
            dofs.iter().filter(|d| d.shared && pred(&d.entity)).count()
        };
        let per_vertex = count(&|e| *e == Entity::Vertex(0));
        let per_edge = count(&|e| *e == Entity::Edge(0));
        let per_cell = dofs.iter().filter(|d| !d.shared).count();

        let vertex_offset = 0;
        let edge_offset = per_vertex * mesh.num_vertices();
        let cell_offset = edge_offset + per_edge * mesh.num_edges();
        let dim = cell_offset + per_cell * mesh.num_cells();

        let local_dim = dofs.len();
        let mut cell_dofs = Vec::with_capacity(local_dim * mesh.num_cells());
        let mut cell_signs = Vec::with_capacity(local_dim * mesh.num_cells());
        for c in 0..mesh.num_cells() {
            let mut local_counter = 0;
            for d in dofs {
                let (index, sign) = if !d.shared {
                    let i = cell_offset + c * per_cell + local_counter;
                    local_counter += 1;
                    (i, 1.0)
                } else {
                    match d.entity {
                        Entity::Vertex(v) => (
                            vertex_offset + mesh.cells()[c][v] * per_vertex + d.entity_index,
                            1.0,
                        ),
                        Entity::Edge(i) => {
                            let e = mesh.cell_edges()[c][i];
                            let reversed = mesh.edge_reversed(c, i);
                            match d.functional {
                                FunctionalKind::NormalMoment { order } => {
                                    let r: f64 = if reversed { -1.0 } else { 1.0 };
                                    let s = mesh.cell_edge_signs()[c][i] * r.powi(order as i32);
                                    (edge_offset + e * per_edge + d.entity_index, s)
                                }
                                FunctionalKind::PointEvaluation(_) => {
                                    let k = if reversed {
                                        per_edge - 1 - d.entity_index
                                    } else {
                                        d.entity_index
                                    };
                                    (edge_offset + e * per_edge + k, 1.0)
                                }
                                other => unreachable!("shared edge DOF of kind {other:?}"),
                            }
                        }
                        Entity::Interior => unreachable!("interior DOFs are never shared"),
                    }
                };
                cell_dofs.push(index);
                cell_signs.push(sign);
            }
        }
        Self {
            mesh,
            element,
            dim,
            local_dim,
            cell_dofs,
            cell_signs,
        }
    }

    pub fn mesh(&self) -> &Arc<Mesh> {
        &self.mesh
    }

    pub fn element(&self) -> &ReferenceElement {
        &self.element
    }

    pub fn kind(&self) -> ElementKind {
        self.element.kind()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn dofs(&self, cell: usize) -> &[usize] {
        &self.cell_dofs[cell * self.local_dim..(cell + 1) * self.local_dim]
    }

    pub fn signs(&self, cell: usize) -> &[f64] {
        &self.cell_signs[cell * self.local_dim..(cell + 1) * self.local_dim]
    }

    /// True when every DOF belongs to a single cell, so the mass matrix is
    /// block diagonal with contiguous `local_dim` blocks.
    pub fn is_discontinuous(&self) -> bool {
        self.element.dofs().iter().all(|d| !d.shared)
    }

    pub fn is_vector(&self) -> bool {
        self.element.kind().is_vector()
    }

    /// Gather the signed local coefficients of a global vector in one cell.
    pub fn local_coefficients(&self, cell: usize, global: &[f64], out: &mut [f64]) {
        for ((o, &d), &s) in out.iter_mut().zip(self.dofs(cell)).zip(self.signs(cell)) {
            *o = s * global[d];
        }
    }
}
