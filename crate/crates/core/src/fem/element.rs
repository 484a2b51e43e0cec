//! Reference elements on the triangle `(0,0), (1,0), (0,1)`.
//!
//! Every element is built the same way: a spanning set of polynomials (the
//! prime basis) and a list of degree-of-freedom functionals. The nodal basis
//! is the prime basis multiplied by the inverse transpose of the dual matrix
//! `A[i][j] = l_i(prime_j)`, so `l_i(phi_k) = δ_ik`.
//!
//! Functionals used:
//!
//! | element | DOFs |
//! |---|---|
//! | P1, P2, P3 | point values at vertices, at equispaced edge points, and (P3) at the centroid |
//! | P2 + bubble | P2 values plus the centroid value; the enrichment is `27 λ0 λ1 λ2` |
//! | DG0, DG1 | point values at interior points, all local to the cell |
//! | RT0 | zeroth normal moment per edge |
//! | BDM1 | normal moments against Legendre `L0, L1` per edge |
//! | BDFM1 | BDM1 moments plus a cell-local zeroth tangential moment per edge |
//! | BDM2 | normal moments against `L0, L1, L2` per edge, plus interior moments against `(1,0)`, `(0,1)` and `(-(y - 1/3), x - 1/3)` |
//!
//! Edge moments integrate against the unnormalised outward normal and the
//! edge parameter `t ∈ [0, 1]` running from the lower to the higher local
//! vertex, so they equal physical normal fluxes under the Piola map.

use nalgebra::DMatrix;

use super::polynomial::{Poly, VecPoly};
use super::quadrature::gauss_legendre;
use crate::mesh::{LOCAL_EDGES, LOCAL_OUTWARD_SIGN};

pub const REFERENCE_VERTICES: [[f64; 2]; 3] = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
const CENTROID: [f64; 2] = [1.0 / 3.0, 1.0 / 3.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElementKind {
    P1,
    P2,
    P2Bubble,
    P3,
    Dg0,
    Dg1,
    Rt0,
    Bdm1,
    Bdfm1,
    Bdm2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    P,
    PBubble,
    DG,
    RT,
    BDM,
    BDFM,
}

impl ElementKind {
    pub const ALL: [ElementKind; 10] = [
        ElementKind::P1,
        ElementKind::P2,
        ElementKind::P2Bubble,
        ElementKind::P3,
        ElementKind::Dg0,
        ElementKind::Dg1,
        ElementKind::Rt0,
        ElementKind::Bdm1,
        ElementKind::Bdfm1,
        ElementKind::Bdm2,
    ];

    pub fn family(self) -> Family {
        match self {
            Self::P1 | Self::P2 | Self::P3 => Family::P,
            Self::P2Bubble => Family::PBubble,
            Self::Dg0 | Self::Dg1 => Family::DG,
            Self::Rt0 => Family::RT,
            Self::Bdm1 | Self::Bdm2 => Family::BDM,
            Self::Bdfm1 => Family::BDFM,
        }
    }

    /// Conventional degree label (RT0 = 0, BDM1 = 1, P2 = 2, ...).
    pub fn degree(self) -> usize {
        match self {
            Self::Dg0 | Self::Rt0 => 0,
            Self::P1 | Self::Dg1 | Self::Bdm1 | Self::Bdfm1 => 1,
            Self::P2 | Self::P2Bubble | Self::Bdm2 => 2,
            Self::P3 => 3,
        }
    }

    /// Highest total polynomial degree present in the local space.
    pub fn polynomial_degree(self) -> usize {
        match self {
            Self::Dg0 => 0,
            Self::P1 | Self::Dg1 | Self::Rt0 | Self::Bdm1 => 1,
            Self::P2 | Self::Bdfm1 | Self::Bdm2 => 2,
            Self::P2Bubble | Self::P3 => 3,
        }
    }

    pub fn is_vector(self) -> bool {
        matches!(self.family(), Family::RT | Family::BDM | Family::BDFM)
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::P1 => "P1",
            Self::P2 => "P2",
            Self::P2Bubble => "P2+B3",
            Self::P3 => "P3",
            Self::Dg0 => "DG0",
            Self::Dg1 => "DG1",
            Self::Rt0 => "RT0",
            Self::Bdm1 => "BDM1",
            Self::Bdfm1 => "BDFM1",
            Self::Bdm2 => "BDM2",
        }
    }
}

/// Geometric entity a DOF is attached to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Entity {
    Vertex(usize),
    Edge(usize),
    Interior,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FunctionalKind {
    PointEvaluation([f64; 2]),
    /// Moment of the normal component against the Legendre polynomial of
    /// this order on the edge.
    NormalMoment {
        order: usize,
    },
    TangentialMoment {
        order: usize,
    },
    InteriorMoment {
        index: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DofDescriptor {
    pub entity: Entity,
    /// Position among the DOFs of the same kind on the same entity.
    pub entity_index: usize,
    pub functional: FunctionalKind,
    /// Whether neighbouring cells share this DOF in the global numbering.
    pub shared: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Basis {
    Scalar(Vec<Poly>),
    Vector(Vec<VecPoly>),
}

/// Scalar tabulation: `values[p][i]`, `grads[p][i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarTable {
    pub values: Vec<Vec<f64>>,
    pub grads: Vec<Vec<[f64; 2]>>,
}

/// Vector tabulation: `values[p][i]`, `divs[p][i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorTable {
    pub values: Vec<Vec<[f64; 2]>>,
    pub divs: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceElement {
    kind: ElementKind,
    dofs: Vec<DofDescriptor>,
    basis: Basis,
}

/// A DOF functional as a weighted sum of point values: `sum_k w_k · v(p_k)`.
/// Scalar elements use only the first weight component.
struct DofRule {
    points: Vec<[f64; 2]>,
    weights: Vec<[f64; 2]>,
}

impl DofRule {
    fn point(p: [f64; 2]) -> Self {
        Self {
            points: vec![p],
            weights: vec![[1.0, 0.0]],
        }
    }

    fn apply_scalar(&self, f: &Poly) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&p, w)| w[0] * f.eval(p))
            .sum()
    }

    fn apply_vector(&self, f: &VecPoly) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&p, w)| {
                let v = f.eval(p);
                w[0] * v[0] + w[1] * v[1]
            })
            .sum()
    }
}

/// Legendre polynomial of the given order on `[0, 1]`.
pub fn shifted_legendre(order: usize, t: f64) -> f64 {
    match order {
        0 => 1.0,
        1 => 2.0 * t - 1.0,
        2 => 6.0 * t * t - 6.0 * t + 1.0,
        _ => panic!("Legendre order {order} not needed by any element"),
    }
}

/// Unnormalised outward normal of reference edge `i` (length = edge length).
pub fn reference_edge_normal(i: usize) -> [f64; 2] {
    let d = reference_edge_tangent(i);
    let s = LOCAL_OUTWARD_SIGN[i];
    [s * d[1], -s * d[0]]
}

/// Reference edge `i` direction, from its lower to higher local vertex.
pub fn reference_edge_tangent(i: usize) -> [f64; 2] {
    let [a, b] = LOCAL_EDGES[i];
    let (pa, pb) = (REFERENCE_VERTICES[a], REFERENCE_VERTICES[b]);
    [pb[0] - pa[0], pb[1] - pa[1]]
}

/// Point at parameter `t` along reference edge `i`.
pub fn reference_edge_point(i: usize, t: f64) -> [f64; 2] {
    let [a, _] = LOCAL_EDGES[i];
    let pa = REFERENCE_VERTICES[a];
    let d = reference_edge_tangent(i);
    [pa[0] + t * d[0], pa[1] + t * d[1]]
}

fn edge_moment(i: usize, order: usize, dir: [f64; 2]) -> DofRule {
    let (ts, ws) = gauss_legendre(4);
    let mut rule = DofRule {
        points: Vec::new(),
        weights: Vec::new(),
    };
    for (t, w) in ts.iter().zip(&ws) {
        let l = w * shifted_legendre(order, *t);
        rule.points.push(reference_edge_point(i, *t));
        rule.weights.push([l * dir[0], l * dir[1]]);
    }
    rule
}

fn interior_moment(weight: impl Fn([f64; 2]) -> [f64; 2]) -> DofRule {
    let q = super::quadrature::triangle_quadrature(6).expect("degree 6 rule");
    DofRule {
        weights: q
            .points
            .iter()
            .zip(&q.weights)
            .map(|(&p, &w)| {
                let m = weight(p);
                [w * m[0], w * m[1]]
            })
            .collect(),
        points: q.points,
    }
}

fn scalar_point_dofs(kind: ElementKind) -> Vec<(DofDescriptor, DofRule)> {
    let mut out = Vec::new();
    let mut push = |entity, entity_index, p: [f64; 2], shared| {
        out.push((
            DofDescriptor {
                entity,
                entity_index,
                functional: FunctionalKind::PointEvaluation(p),
                shared,
            },
            DofRule::point(p),
        ))
    };
    match kind {
        ElementKind::Dg0 => push(Entity::Interior, 0, CENTROID, false),
        ElementKind::Dg1 => {
            for (k, p) in [
                [1.0 / 6.0, 1.0 / 6.0],
                [2.0 / 3.0, 1.0 / 6.0],
                [1.0 / 6.0, 2.0 / 3.0],
            ]
            .into_iter()
            .enumerate()
            {
                push(Entity::Interior, k, p, false);
            }
        }
        _ => {
            for (v, p) in REFERENCE_VERTICES.iter().enumerate() {
                push(Entity::Vertex(v), 0, *p, true);
            }
            let edge_params: &[f64] = match kind {
                ElementKind::P1 => &[],
                ElementKind::P2 | ElementKind::P2Bubble => &[0.5],
                ElementKind::P3 => &[1.0 / 3.0, 2.0 / 3.0],
                _ => unreachable!(),
            };
            for e in 0..3 {
                for (k, &t) in edge_params.iter().enumerate() {
                    push(Entity::Edge(e), k, reference_edge_point(e, t), true);
                }
            }
            if matches!(kind, ElementKind::P2Bubble | ElementKind::P3) {
                push(Entity::Interior, 0, CENTROID, false);
            }
        }
    }
    out
}

fn vector_dofs(kind: ElementKind) -> Vec<(DofDescriptor, DofRule)> {
    let normal_orders = match kind {
        ElementKind::Rt0 => 1,
        ElementKind::Bdm1 | ElementKind::Bdfm1 => 2,
        ElementKind::Bdm2 => 3,
        _ => unreachable!(),
    };
    let mut out = Vec::new();
    for e in 0..3 {
        for order in 0..normal_orders {
            out.push((
                DofDescriptor {
                    entity: Entity::Edge(e),
                    entity_index: order,
                    functional: FunctionalKind::NormalMoment { order },
                    shared: true,
                },
                edge_moment(e, order, reference_edge_normal(e)),
            ));
        }
    }
    if kind == ElementKind::Bdfm1 {
        for e in 0..3 {
            out.push((
                DofDescriptor {
                    entity: Entity::Edge(e),
                    entity_index: 0,
                    functional: FunctionalKind::TangentialMoment { order: 0 },
                    shared: false,
                },
                edge_moment(e, 0, reference_edge_tangent(e)),
            ));
        }
    }
    if kind == ElementKind::Bdm2 {
        let weights: [fn([f64; 2]) -> [f64; 2]; 3] = [
            |_| [1.0, 0.0],
            |_| [0.0, 1.0],
            |p| [-(p[1] - CENTROID[1]), p[0] - CENTROID[0]],
        ];
        for (index, w) in weights.into_iter().enumerate() {
            out.push((
                DofDescriptor {
                    entity: Entity::Interior,
                    entity_index: index,
                    functional: FunctionalKind::InteriorMoment { index },
                    shared: false,
                },
                interior_moment(w),
            ));
        }
    }
    out
}

fn scalar_prime(kind: ElementKind) -> Vec<Poly> {
    match kind {
        ElementKind::Dg0 => Poly::monomials(0),
        ElementKind::P1 | ElementKind::Dg1 => Poly::monomials(1),
        ElementKind::P2 => Poly::monomials(2),
        ElementKind::P3 => Poly::monomials(3),
        ElementKind::P2Bubble => {
            let mut v = Poly::monomials(2);
            let bubble = Poly::barycentric(0) * Poly::barycentric(1) * Poly::barycentric(2);
            v.push(bubble.scale(27.0));
            v
        }
        _ => unreachable!(),
    }
}

fn vector_prime(kind: ElementKind) -> Vec<VecPoly> {
    let full = |deg: usize| -> Vec<VecPoly> {
        let m = Poly::monomials(deg);
        m.iter()
            .map(|&p| VecPoly([p, Poly::zero()]))
            .chain(m.iter().map(|&p| VecPoly([Poly::zero(), p])))
            .collect()
    };
    match kind {
        ElementKind::Rt0 => vec![
            VecPoly([Poly::constant(1.0), Poly::zero()]),
            VecPoly([Poly::zero(), Poly::constant(1.0)]),
            VecPoly([Poly::x(), Poly::y()]),
        ],
        ElementKind::Bdm1 => full(1),
        ElementKind::Bdm2 => full(2),
        ElementKind::Bdfm1 => {
            // P1 vectors plus the edge bubbles λj λk t_i, which have zero
            // normal trace on every edge.
            let mut v = full(1);
            for (i, [a, b]) in LOCAL_EDGES.iter().enumerate() {
                let bubble = Poly::barycentric(*a) * Poly::barycentric(*b);
                v.push(VecPoly::along(bubble, reference_edge_tangent(i)));
            }
            v
        }
        _ => unreachable!(),
    }
}

fn dual_inverse(dual: DMatrix<f64>) -> DMatrix<f64> {
    let n = dual.nrows();
    dual.lu()
        .try_inverse()
        .unwrap_or_else(|| panic!("dual matrix of size {n} is singular: DOFs not unisolvent"))
}

impl ReferenceElement {
    pub fn new(kind: ElementKind) -> Self {
        if kind.is_vector() {
            let (dofs, rules): (Vec<_>, Vec<_>) = vector_dofs(kind).into_iter().unzip();
            let prime = vector_prime(kind);
            assert_eq!(
                prime.len(),
                dofs.len(),
                "{kind:?}: prime/dual size mismatch"
            );
            let n = dofs.len();
            let dual = DMatrix::from_fn(n, n, |i, j| rules[i].apply_vector(&prime[j]));
            let inv = dual_inverse(dual);
            let basis = (0..n)
                .map(|k| {
                    (0..n).fold(VecPoly::default(), |acc, j| {
                        acc + prime[j].scale(inv[(j, k)])
                    })
                })
                .collect();
            Self {
                kind,
                dofs,
                basis: Basis::Vector(basis),
            }
        } else {
            let (dofs, rules): (Vec<_>, Vec<_>) = scalar_point_dofs(kind).into_iter().unzip();
            let prime = scalar_prime(kind);
            assert_eq!(
                prime.len(),
                dofs.len(),
                "{kind:?}: prime/dual size mismatch"
            );
            let n = dofs.len();
            let dual = DMatrix::from_fn(n, n, |i, j| rules[i].apply_scalar(&prime[j]));
            let inv = dual_inverse(dual);
            let basis = (0..n)
                .map(|k| (0..n).fold(Poly::zero(), |acc, j| acc + prime[j].scale(inv[(j, k)])))
                .collect();
            Self {
                kind,
                dofs,
                basis: Basis::Scalar(basis),
            }
        }
    }

    pub fn kind(&self) -> ElementKind {
        self.kind
    }

    pub fn family(&self) -> Family {
        self.kind.family()
    }

    pub fn degree(&self) -> usize {
        self.kind.degree()
    }

    pub fn dim(&self) -> usize {
        self.dofs.len()
    }

    pub fn value_size(&self) -> usize {
        if self.kind.is_vector() {
            2
        } else {
            1
        }
    }

    pub fn dofs(&self) -> &[DofDescriptor] {
        &self.dofs
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn scalar_basis(&self) -> &[Poly] {
        match &self.basis {
            Basis::Scalar(b) => b,
            Basis::Vector(_) => panic!("{} is vector valued", self.kind.name()),
        }
    }

    pub fn vector_basis(&self) -> &[VecPoly] {
        match &self.basis {
            Basis::Vector(b) => b,
            Basis::Scalar(_) => panic!("{} is scalar valued", self.kind.name()),
        }
    }

    pub fn tabulate_scalar(&self, points: &[[f64; 2]]) -> ScalarTable {
        let basis = self.scalar_basis();
        let derivs: Vec<(Poly, Poly)> = basis.iter().map(|b| (b.dx(), b.dy())).collect();
        ScalarTable {
            values: points
                .iter()
                .map(|&p| basis.iter().map(|b| b.eval(p)).collect())
                .collect(),
            grads: points
                .iter()
                .map(|&p| {
                    derivs
                        .iter()
                        .map(|(dx, dy)| [dx.eval(p), dy.eval(p)])
                        .collect()
                })
                .collect(),
        }
    }

    pub fn tabulate_vector(&self, points: &[[f64; 2]]) -> VectorTable {
        let basis = self.vector_basis();
        VectorTable {
            values: points
                .iter()
                .map(|&p| basis.iter().map(|b| b.eval(p)).collect())
                .collect(),
            divs: points
                .iter()
                .map(|&p| basis.iter().map(|b| b.div(p)).collect())
                .collect(),
        }
    }

    /// Apply local DOF functional `i` to a scalar function on the reference cell.
    pub fn apply_dof_scalar(&self, i: usize, f: impl Fn([f64; 2]) -> f64) -> f64 {
        let rule = self.rule(i);
        rule.points
            .iter()
            .zip(&rule.weights)
            .map(|(&p, w)| w[0] * f(p))
            .sum()
    }

    /// Apply local DOF functional `i` to a vector function on the reference cell.
    pub fn apply_dof_vector(&self, i: usize, f: impl Fn([f64; 2]) -> [f64; 2]) -> f64 {
        let rule = self.rule(i);
        rule.points
            .iter()
            .zip(&rule.weights)
            .map(|(&p, w)| {
                let v = f(p);
                w[0] * v[0] + w[1] * v[1]
            })
            .sum()
    }

    fn rule(&self, i: usize) -> DofRule {
        let mut all = if self.kind.is_vector() {
            vector_dofs(self.kind)
        } else {
            scalar_point_dofs(self.kind)
        };
        all.swap_remove(i).1
    }

    /// Local DOF values (interpolant coefficients) of a vector function.
    pub fn interpolate_vector(&self, f: impl Fn([f64; 2]) -> [f64; 2]) -> Vec<f64> {
        let rules = vector_dofs(self.kind);
        rules
            .iter()
            .map(|(_, r)| {
                r.points
                    .iter()
                    .zip(&r.weights)
                    .map(|(&p, w)| {
                        let v = f(p);
                        w[0] * v[0] + w[1] * v[1]
                    })
                    .sum()
            })
            .collect()
    }

    /// Local DOF values of a scalar function.
    pub fn interpolate_scalar(&self, f: impl Fn([f64; 2]) -> f64) -> Vec<f64> {
        scalar_point_dofs(self.kind)
            .iter()
            .map(|(_, r)| {
                r.points
                    .iter()
                    .zip(&r.weights)
                    .map(|(&p, w)| w[0] * f(p))
                    .sum()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn local_dimensions() {
        let dims = [
            (ElementKind::Rt0, 3),
            (ElementKind::Bdm1, 6),
            (ElementKind::Bdfm1, 9),
            (ElementKind::Bdm2, 12),
            (ElementKind::P1, 3),
            (ElementKind::P2, 6),
            (ElementKind::P2Bubble, 7),
            (ElementKind::P3, 10),
            (ElementKind::Dg0, 1),
            (ElementKind::Dg1, 3),
        ];
        for (k, d) in dims {
            assert_eq!(ReferenceElement::new(k).dim(), d, "{k:?}");
        }
    }

    #[test]
    fn nodal_duality() {
        for kind in ElementKind::ALL {
            let el = ReferenceElement::new(kind);
            for i in 0..el.dim() {
                for j in 0..el.dim() {
                    let v = match el.basis() {
                        Basis::Scalar(b) => el.apply_dof_scalar(i, |p| b[j].eval(p)),
                        Basis::Vector(b) => el.apply_dof_vector(i, |p| b[j].eval(p)),
                    };
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((v - expect).abs() < 1e-12, "{kind:?} l_{i}(phi_{j}) = {v}");
                }
            }
        }
    }

    #[test]
    fn divergence_degree_matches_scalar_space() {
        let expect = [
            (ElementKind::Rt0, 0),
            (ElementKind::Bdm1, 0),
            (ElementKind::Bdfm1, 1),
            (ElementKind::Bdm2, 1),
        ];
        for (kind, deg) in expect {
            let el = ReferenceElement::new(kind);
            for b in el.vector_basis() {
                let div = b.0[0].dx() + b.0[1].dy();
                let second = [div.dx().dx(), div.dx().dy(), div.dy().dy()];
                if deg == 0 {
                    let g = div.grad([0.3, 0.2]);
                    assert!(g[0].abs() < 1e-12 && g[1].abs() < 1e-12, "{kind:?}");
                }
                for s in second {
                    assert!(s.eval([0.1, 0.7]).abs() < 1e-12, "{kind:?}");
                }
            }
        }
    }

    #[test]
    fn normal_traces_have_expected_degree() {
        // BDFM1 normal components are linear on each edge.
        let el = ReferenceElement::new(ElementKind::Bdfm1);
        for b in el.vector_basis() {
            for e in 0..3 {
                let n = reference_edge_normal(e);
                let f = |t: f64| {
                    let v = b.eval(reference_edge_point(e, t));
                    v[0] * n[0] + v[1] * n[1]
                };
                // second difference of a linear function vanishes
                let d2 = f(0.0) - 2.0 * f(0.5) + f(1.0);
                assert!(d2.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rt0_unit_edge_fluxes() {
        let el = ReferenceElement::new(ElementKind::Rt0);
        for (i, b) in el.vector_basis().iter().enumerate() {
            // divergence integrates to the total outward flux = 1
            let div = b.div([0.2, 0.2]);
            assert!((div * 0.5 - 1.0).abs() < 1e-12, "basis {i}: div {div}");
        }
    }

    #[test]
    fn scalar_partition_of_unity() {
        for kind in [
            ElementKind::P1,
            ElementKind::P2,
            ElementKind::P2Bubble,
            ElementKind::P3,
        ] {
            let el = ReferenceElement::new(kind);
            let t = el.tabulate_scalar(&[[0.21, 0.33]]);
            let s: f64 = t.values[0].iter().sum();
            assert!((s - 1.0).abs() < 1e-13, "{kind:?}");
        }
    }
}
