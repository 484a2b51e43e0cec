//! Maps from reference to physical values on affine cells.

use crate::error::{Error, Result};
use crate::mesh::CellGeometry;

/// Contravariant Piola map `v = J v̂ / det J` applied to each value.
pub fn piola_map(
    cell: usize,
    geometry: &CellGeometry,
    reference_values: &[[f64; 2]],
) -> Result<Vec<[f64; 2]>> {
    check(cell, geometry)?;
    Ok(reference_values
        .iter()
        .map(|&v| contravariant(geometry, v))
        .collect())
}

/// Divergence under the Piola map: `div v = div v̂ / det J`.
pub fn piola_divergence(
    cell: usize,
    geometry: &CellGeometry,
    reference_divs: &[f64],
) -> Result<Vec<f64>> {
    check(cell, geometry)?;
    Ok(reference_divs.iter().map(|&d| d / geometry.det).collect())
}

fn check(cell: usize, geometry: &CellGeometry) -> Result<()> {
    if geometry.det > 0.0 {
        Ok(())
    } else {
        Err(Error::DegenerateCell {
            cell,
            det: geometry.det,
        })
    }
}

#[inline]
pub(crate) fn contravariant(g: &CellGeometry, v: [f64; 2]) -> [f64; 2] {
    let j = &g.jacobian;
    [
        (j[0][0] * v[0] + j[0][1] * v[1]) / g.det,
        (j[1][0] * v[0] + j[1][1] * v[1]) / g.det,
    ]
}

/// Physical gradient of a scalar: `J^{-T} ∇̂`.
#[inline]
pub(crate) fn covariant(g: &CellGeometry, grad: [f64; 2]) -> [f64; 2] {
    let inv = g.inverse_jacobian();
    [
        inv[0][0] * grad[0] + inv[1][0] * grad[1],
        inv[0][1] * grad[0] + inv[1][1] * grad[1],
    ]
}
