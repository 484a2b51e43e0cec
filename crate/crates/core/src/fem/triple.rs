//! Compatible (E, S, V) space triples.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::element::ElementKind;
use super::space::FunctionSpace;
use crate::error::Error;
use crate::mesh::Mesh;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElementFamily {
    Rt0,
    Bdm1,
    Bdfm1,
    Bdm2,
}

impl ElementFamily {
    pub const ALL: [ElementFamily; 4] = [Self::Rt0, Self::Bdm1, Self::Bdfm1, Self::Bdm2];

    /// `(E, S, V)` element kinds.
    pub fn kinds(self) -> (ElementKind, ElementKind, ElementKind) {
        match self {
            Self::Rt0 => (ElementKind::P1, ElementKind::Rt0, ElementKind::Dg0),
            Self::Bdm1 => (ElementKind::P2, ElementKind::Bdm1, ElementKind::Dg0),
            Self::Bdfm1 => (ElementKind::P2Bubble, ElementKind::Bdfm1, ElementKind::Dg1),
            Self::Bdm2 => (ElementKind::P3, ElementKind::Bdm2, ElementKind::Dg1),
        }
    }

    /// Exactness degree integrating every form of the scheme exactly; the
    /// largest integrand is `w · q* F⊥` with `q* = q - τ (u·∇) q`.
    pub fn quadrature_degree(self) -> usize {
        let (e, s, v) = self.kinds();
        let (de, ds, dv) = (
            e.polynomial_degree(),
            s.polynomial_degree(),
            v.polynomial_degree(),
        );
        let q_star = de.max(de + ds - 1);
        (2 * ds + q_star).max(2 * de + dv)
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Rt0 => "rt0",
            Self::Bdm1 => "bdm1",
            Self::Bdfm1 => "bdfm1",
            Self::Bdm2 => "bdm2",
        }
    }
}

impl fmt::Display for ElementFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ElementFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rt0" => Ok(Self::Rt0),
            "bdm1" => Ok(Self::Bdm1),
            "bdfm1" => Ok(Self::Bdfm1),
            "bdm2" => Ok(Self::Bdm2),
            _ => Err(Error::UnknownFamily(s.to_string())),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Triple {
    pub family: ElementFamily,
    pub e: Arc<FunctionSpace>,
    pub s: Arc<FunctionSpace>,
    pub v: Arc<FunctionSpace>,
}

pub fn make_triple(mesh: Arc<Mesh>, family: ElementFamily) -> Triple {
    let (e, s, v) = family.kinds();
    Triple {
        family,
        e: Arc::new(FunctionSpace::new(mesh.clone(), e)),
        s: Arc::new(FunctionSpace::new(mesh.clone(), s)),
        v: Arc::new(FunctionSpace::new(mesh, v)),
    }
}
