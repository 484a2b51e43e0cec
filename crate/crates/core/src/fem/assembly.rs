//! Mass matrices, optionally weighted by a positive scalar field.

use std::sync::Arc;

use super::field::Field;
use super::quadrature::{triangle_quadrature, QuadratureRule};
use super::space::FunctionSpace;
use super::tables::{gather, CellTables};
use crate::error::{Error, Result};
use crate::linalg::{CellScatter, CsrMatrix};

/// Smallest total degree that integrates `weight · φ_i · φ_j` exactly.
pub fn mass_degree(space: &FunctionSpace, weight: Option<&FunctionSpace>) -> usize {
    let d =
        2 * space.kind().polynomial_degree() + weight.map_or(0, |w| w.kind().polynomial_degree());
    d.max(1)
}

/// `M_ij = ∫ w φ_i · φ_j` (`w = 1` when no weight is given).
pub fn assemble_mass(space: &Arc<FunctionSpace>, weight: Option<&Field>) -> Result<CsrMatrix> {
    if let Some(w) = weight {
        if !Arc::ptr_eq(w.space().mesh(), space.mesh()) || w.space().is_vector() {
            return Err(Error::SpaceMismatch(
                "mass weight must be a scalar field on the same mesh".into(),
            ));
        }
    }
    let rule = triangle_quadrature(mass_degree(space, weight.map(|w| w.space().as_ref())))?;
    let mut asm = MassAssembler::new(space.clone(), &rule);
    match weight {
        None => asm.assemble(None)?,
        Some(w) => {
            let wt = CellTables::new(w.space(), &rule);
            asm.assemble(Some((&wt, w.space(), w.coeffs(), 0.0)))?
        }
    }
    let mut m = asm.into_matrix();
    m.drop_zeros();
    Ok(m)
}

/// Reusable mass assembly on a fixed pattern.
#[derive(Debug, Clone)]
pub struct MassAssembler {
    space: Arc<FunctionSpace>,
    tables: CellTables,
    matrix: CsrMatrix,
    scatter: CellScatter,
}

impl MassAssembler {
    pub fn new(space: Arc<FunctionSpace>, rule: &QuadratureRule) -> Self {
        let tables = CellTables::new(&space, rule);
        Self::with_tables(space, tables)
    }

    pub fn with_tables(space: Arc<FunctionSpace>, tables: CellTables) -> Self {
        let n = space.dim();
        let nc = space.mesh().num_cells();
        let (mut matrix, scatter) =
            CellScatter::build(n, n, nc, |c| space.dofs(c), |c| space.dofs(c));
        matrix.set_symmetric(true);
        Self {
            space,
            tables,
            matrix,
            scatter,
        }
    }

    pub fn tables(&self) -> &CellTables {
        &self.tables
    }

    pub fn matrix(&self) -> &CsrMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CsrMatrix {
        self.matrix
    }

    /// Re-assemble the values. The weight is `(tables, space, coefficients,
    /// threshold)`; any weight value `<= threshold` is an error. Weight tables
    /// must share this assembler's quadrature rule.
    pub fn assemble(
        &mut self,
        weight: Option<(&CellTables, &FunctionSpace, &[f64], f64)>,
    ) -> Result<()> {
        self.matrix.values_mut().iter_mut().for_each(|v| *v = 0.0);
        let t = &self.tables;
        let n = t.num_dofs();
        let nc = self.space.mesh().num_cells();
        let mut local = vec![0.0; n * n];
        let mut wloc = vec![0.0; weight.map_or(0, |(wt, ..)| wt.num_dofs())];
        for c in 0..nc {
            local.iter_mut().for_each(|v| *v = 0.0);
            if let Some((_, ws, wc, _)) = weight {
                gather(ws, c, wc, &mut wloc);
            }
            for q in 0..t.num_points() {
                let mut w = t.weight(c, q);
                if let Some((wt, _, _, threshold)) = weight {
                    let val = wt.eval_scalar(c, q, &wloc);
                    if !(val > threshold) {
                        return Err(Error::NonPositiveDepth {
                            cell: c,
                            value: val,
                            threshold,
                        });
                    }
                    w *= val;
                }
                if t.is_vector() {
                    let v = t.vectors(c, q);
                    for i in 0..n {
                        let wi = [w * v[2 * i], w * v[2 * i + 1]];
                        for j in 0..n {
                            local[i * n + j] += wi[0] * v[2 * j] + wi[1] * v[2 * j + 1];
                        }
                    }
                } else {
                    let v = t.scalar(c, q);
                    for i in 0..n {
                        let wi = w * v[i];
                        for j in 0..n {
                            local[i * n + j] += wi * v[j];
                        }
                    }
                }
            }
            self.scatter.add(&mut self.matrix, c, &local);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::element::ElementKind;
    use crate::mesh::structured_mesh;

    #[test]
    fn dg0_mass_is_cell_areas() {
        let m = Arc::new(structured_mesh(4).unwrap());
        let v = Arc::new(FunctionSpace::new(m.clone(), ElementKind::Dg0));
        let mass = assemble_mass(&v, None).unwrap();
        assert_eq!(mass.nnz(), m.num_cells());
        for c in 0..m.num_cells() {
            assert!((mass.get(c, c) - m.geometry(c).area).abs() < 1e-15);
        }
    }

    #[test]
    fn p1_mass_sums_to_area() {
        let m = Arc::new(structured_mesh(5).unwrap());
        let e = Arc::new(FunctionSpace::new(m.clone(), ElementKind::P1));
        let h = Field::new(
            Arc::new(FunctionSpace::new(m, ElementKind::Dg0)),
            vec![1.0; 50],
        )
        .unwrap();
        let mass = assemble_mass(&e, Some(&h)).unwrap();
        let total: f64 = mass.values().iter().sum();
        assert!((total - 1.0).abs() < 1e-13);
        assert!(mass.asymmetry() <= 1e-13);
    }

    #[test]
    fn weight_scales_linearly() {
        let m = Arc::new(structured_mesh(4).unwrap());
        let e = Arc::new(FunctionSpace::new(m.clone(), ElementKind::P2));
        let v = Arc::new(FunctionSpace::new(m.clone(), ElementKind::Dg1));
        let plain = assemble_mass(&e, None).unwrap();
        let h = Field::new(v.clone(), vec![3.5; v.dim()]).unwrap();
        let weighted = assemble_mass(&e, Some(&h)).unwrap();
        for (a, b) in plain.values().iter().zip(weighted.values()) {
            assert!((3.5 * a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_non_positive_weight() {
        let m = Arc::new(structured_mesh(3).unwrap());
        let e = Arc::new(FunctionSpace::new(m.clone(), ElementKind::P1));
        let v = Arc::new(FunctionSpace::new(m, ElementKind::Dg0));
        let mut coeffs = vec![1.0; v.dim()];
        coeffs[4] = -0.5;
        let h = Field::new(v, coeffs).unwrap();
        assert!(matches!(
            assemble_mass(&e, Some(&h)),
            Err(Error::NonPositiveDepth { cell: 4, .. })
        ));
    }

    #[test]
    fn vector_mass_is_symmetric() {
        let m = Arc::new(structured_mesh(4).unwrap());
        for k in [
            ElementKind::Rt0,
            ElementKind::Bdm1,
            ElementKind::Bdfm1,
            ElementKind::Bdm2,
        ] {
            let s = Arc::new(FunctionSpace::new(m.clone(), k));
            let mass = assemble_mass(&s, None).unwrap();
            assert!(mass.asymmetry() <= 1e-13, "{k:?}");
        }
    }
}
