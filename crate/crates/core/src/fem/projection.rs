//! L² projection of analytic functions and fields onto a function space.

use std::sync::Arc;

use super::assembly::assemble_mass;
use super::field::Field;
use super::quadrature::{triangle_quadrature, MAX_TRIANGLE_DEGREE};
use super::space::FunctionSpace;
use super::tables::{gather, CellTables};
use crate::error::{Error, Result};
use crate::linalg::{cg_solve, default_maxit, BlockDiagonalSolver, CgOptions};

/// Extra exactness degrees used when integrating analytic sources.
pub const ANALYTIC_EXTRA_DEGREE: usize = 18;

pub enum Source<'a> {
    Scalar(&'a dyn Fn([f64; 2]) -> f64),
    Vector(&'a dyn Fn([f64; 2]) -> [f64; 2]),
    Field(&'a Field),
}

/// Point in `[0, 1)²` equivalent to `x` on the torus.
pub fn wrap_point(x: [f64; 2]) -> [f64; 2] {
    [x[0] - x[0].floor(), x[1] - x[1].floor()]
}

pub fn l2_project(source: Source<'_>, target: &Arc<FunctionSpace>) -> Result<Field> {
    l2_project_with(source, target, CgOptions::default())
}

pub fn l2_project_with(
    source: Source<'_>,
    target: &Arc<FunctionSpace>,
    opts: CgOptions,
) -> Result<Field> {
    if let Source::Field(f) = source {
        if **f.space() == **target {
            return Ok(f.clone());
        }
    }
    let rhs = projection_rhs(&source, target)?;
    solve_mass(target, &rhs, opts).and_then(|c| Field::new(target.clone(), c))
}

/// `b_i = ∫ φ_i · source`.
pub fn projection_rhs(source: &Source<'_>, target: &Arc<FunctionSpace>) -> Result<Vec<f64>> {
    let tdeg = target.kind().polynomial_degree();
    let degree = match source {
        Source::Field(f) => {
            if !Arc::ptr_eq(f.space().mesh(), target.mesh()) {
                return Err(Error::SpaceMismatch(
                    "source field lives on a different mesh".into(),
                ));
            }
            (tdeg + f.space().kind().polynomial_degree()).max(1)
        }
        _ => (tdeg + ANALYTIC_EXTRA_DEGREE).min(MAX_TRIANGLE_DEGREE),
    };
    let source_vector = match source {
        Source::Scalar(_) => false,
        Source::Vector(_) => true,
        Source::Field(f) => f.space().is_vector(),
    };
    if source_vector != target.is_vector() {
        return Err(Error::SpaceMismatch(format!(
            "cannot project a {} source onto {}",
            if source_vector { "vector" } else { "scalar" },
            target.kind().name()
        )));
    }
    let rule = triangle_quadrature(degree)?;
    let tt = CellTables::new(target, &rule);
    let st = match source {
        Source::Field(f) => Some(CellTables::new(f.space(), &rule)),
        _ => None,
    };
    let n = tt.num_dofs();
    let mut slocal = vec![0.0; st.as_ref().map_or(0, CellTables::num_dofs)];
    let mut b = vec![0.0; target.dim()];
    for c in 0..target.mesh().num_cells() {
        if let (Source::Field(f), Some(_)) = (source, &st) {
            gather(f.space(), c, f.coeffs(), &mut slocal);
        }
        let dofs = target.dofs(c);
        for q in 0..tt.num_points() {
            let w = tt.weight(c, q);
            let x = tt.point(c, q);
            if target.is_vector() {
                let v = match (source, &st) {
                    (Source::Vector(f), _) => f(wrap_point(x)),
                    (Source::Field(_), Some(st)) => st.eval_vector(c, q, &slocal),
                    _ => unreachable!(),
                };
                let phi = tt.vectors(c, q);
                for i in 0..n {
                    b[dofs[i]] += w * (phi[2 * i] * v[0] + phi[2 * i + 1] * v[1]);
                }
            } else {
                let v = match (source, &st) {
                    (Source::Scalar(f), _) => f(wrap_point(x)),
                    (Source::Field(_), Some(st)) => st.eval_scalar(c, q, &slocal),
                    _ => unreachable!(),
                };
                let phi = tt.scalar(c, q);
                for i in 0..n {
                    b[dofs[i]] += w * phi[i] * v;
                }
            }
        }
    }
    Ok(b)
}

/// Solve `M x = b` with the unweighted mass matrix of `space`.
pub fn solve_mass(space: &Arc<FunctionSpace>, b: &[f64], opts: CgOptions) -> Result<Vec<f64>> {
    let mass = assemble_mass(space, None)?;
    if space.is_discontinuous() {
        BlockDiagonalSolver::new(&mass, space.local_dim())?.solve(b)
    } else {
        let maxit = opts.maxit.unwrap_or_else(|| default_maxit(space.dim()));
        cg_solve(&mass, b, opts.tol, maxit).map(|(x, _)| x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::element::ElementKind;
    use crate::mesh::structured_mesh;
    use std::f64::consts::PI;

    #[test]
    fn constant_into_dg() {
        let m = Arc::new(structured_mesh(4).unwrap());
        for k in [ElementKind::Dg0, ElementKind::Dg1, ElementKind::P2] {
            let v = Arc::new(FunctionSpace::new(m.clone(), k));
            let f = l2_project(Source::Scalar(&|_| 7.0), &v).unwrap();
            for c in f.coeffs() {
                assert!((c - 7.0).abs() < 1e-12, "{k:?}");
            }
        }
    }

    #[test]
    fn idempotent_on_own_space() {
        let m = Arc::new(structured_mesh(4).unwrap());
        for k in [ElementKind::Bdfm1, ElementKind::P3, ElementKind::Dg1] {
            let s = Arc::new(FunctionSpace::new(m.clone(), k));
            let coeffs: Vec<f64> = (0..s.dim()).map(|i| ((i * 37 % 11) as f64) - 5.0).collect();
            let f = Field::new(s.clone(), coeffs.clone()).unwrap();
            let g = l2_project(Source::Field(&f), &s).unwrap();
            for (a, b) in g.coeffs().iter().zip(&coeffs) {
                assert!((a - b).abs() <= 1e-12, "{k:?} {a} {b}");
            }
        }
    }

    #[test]
    fn nested_spaces_round_trip() {
        let m = Arc::new(structured_mesh(4).unwrap());
        let pairs = [
            (ElementKind::Bdm1, ElementKind::Bdm2),
            (ElementKind::P2, ElementKind::P3),
            (ElementKind::Dg0, ElementKind::Dg1),
        ];
        for (small, big) in pairs {
            let s = Arc::new(FunctionSpace::new(m.clone(), small));
            let b = Arc::new(FunctionSpace::new(m.clone(), big));
            let coeffs: Vec<f64> = (0..s.dim()).map(|i| ((i * 13 % 7) as f64) - 3.0).collect();
            let f = Field::new(s.clone(), coeffs.clone()).unwrap();
            let up = l2_project(Source::Field(&f), &b).unwrap();
            let back = l2_project(Source::Field(&up), &s).unwrap();
            for (x, y) in back.coeffs().iter().zip(&coeffs) {
                assert!((x - y).abs() <= 1e-9, "{small:?} -> {big:?}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn galerkin_orthogonality() {
        let m = Arc::new(structured_mesh(6).unwrap());
        let s = Arc::new(FunctionSpace::new(m, ElementKind::Bdm1));
        let f = |p: [f64; 2]| {
            [
                (2.0 * PI * p[0]).sin(),
                (2.0 * PI * p[1]).cos() * p[0].cos(),
            ]
        };
        let proj = l2_project(Source::Vector(&f), &s).unwrap();
        let b = projection_rhs(&Source::Vector(&f), &s).unwrap();
        let mb = assemble_mass(&s, None).unwrap().matvec(proj.coeffs());
        let bn = b.iter().map(|v| v * v).sum::<f64>().sqrt();
        for (x, y) in mb.iter().zip(&b) {
            assert!((x - y).abs() <= 1e-11 * bn);
        }
    }

    #[test]
    fn mismatched_kinds() {
        let m = Arc::new(structured_mesh(3).unwrap());
        let s = Arc::new(FunctionSpace::new(m, ElementKind::Rt0));
        assert!(matches!(
            l2_project(Source::Scalar(&|_| 1.0), &s),
            Err(Error::SpaceMismatch(_))
        ));
    }
}
