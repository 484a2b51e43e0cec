//! Reference elements, quadrature, function spaces, fields and projection.

pub mod assembly;
pub mod element;
pub mod field;
pub mod piola;
pub mod polynomial;
pub mod projection;
pub mod quadrature;
pub mod space;
pub mod tables;
pub mod triple;

pub use assembly::{assemble_mass, MassAssembler};
pub use element::{DofDescriptor, ElementKind, Entity, Family, FunctionalKind, ReferenceElement};
pub use field::Field;
pub use piola::{piola_divergence, piola_map};
pub use projection::{l2_project, l2_project_with, Source};
pub use quadrature::{triangle_quadrature, QuadratureRule};
pub use space::FunctionSpace;
pub use tables::CellTables;
pub use triple::{make_triple, ElementFamily, Triple};
