//! Doubly-periodic triangulations of the unit square.
//!
//! A [`Mesh`] stores one representative per periodic vertex in `[0, 1)²`.
//! Each cell additionally carries *unwrapped* vertex coordinates: integer
//! shifted copies of its three vertices (taken from the input file, or the
//! copies minimising the cell diameter when none are given). All geometry (Jacobians, quadrature points, Piola maps) is
//! computed from the unwrapped coordinates, so cells that cross the periodic
//! seam behave exactly like interior cells.
//!
//! Edges are oriented from the lower to the higher global vertex index. The
//! global edge normal is that direction rotated 90° clockwise. For every cell
//! and local edge, `cell_edge_signs` records `+1` when the cell's outward
//! normal agrees with the global normal and `-1` otherwise.

mod msh;

use std::collections::HashMap;

use crate::error::{Error, Result};

pub use msh::{parse_msh, read_msh, to_msh_string, write_msh};

/// Local edge `i` joins these two local vertices; it is opposite vertex `i`.
pub const LOCAL_EDGES: [[usize; 2]; 3] = [[1, 2], [0, 2], [0, 1]];

/// Sign relating a local edge direction (low to high local vertex) rotated
/// clockwise to the outward normal of a counterclockwise cell.
pub const LOCAL_OUTWARD_SIGN: [f64; 3] = [1.0, -1.0, 1.0];

/// Affine map from the reference triangle `(0,0), (1,0), (0,1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellGeometry {
    /// Unwrapped vertex coordinates, counterclockwise.
    pub coords: [[f64; 2]; 3],
    /// `jacobian[r][c] = d x_r / d xhat_c`.
    pub jacobian: [[f64; 2]; 2],
    pub det: f64,
    pub area: f64,
}

impl CellGeometry {
    pub fn from_coords(coords: [[f64; 2]; 3]) -> Self {
        let [p0, p1, p2] = coords;
        let jacobian = [
            [p1[0] - p0[0], p2[0] - p0[0]],
            [p1[1] - p0[1], p2[1] - p0[1]],
        ];
        let det = jacobian[0][0] * jacobian[1][1] - jacobian[0][1] * jacobian[1][0];
        Self {
            coords,
            jacobian,
            det,
            area: 0.5 * det,
        }
    }

    /// Physical point of a reference point.
    pub fn map(&self, xi: [f64; 2]) -> [f64; 2] {
        let j = &self.jacobian;
        let p0 = self.coords[0];
        [
            p0[0] + j[0][0] * xi[0] + j[0][1] * xi[1],
            p0[1] + j[1][0] * xi[0] + j[1][1] * xi[1],
        ]
    }

    /// Reference point of a physical point (in the unwrapped frame).
    pub fn inverse_map(&self, x: [f64; 2]) -> [f64; 2] {
        let d = [x[0] - self.coords[0][0], x[1] - self.coords[0][1]];
        let inv = self.inverse_jacobian();
        [
            inv[0][0] * d[0] + inv[0][1] * d[1],
            inv[1][0] * d[0] + inv[1][1] * d[1],
        ]
    }

    pub fn inverse_jacobian(&self) -> [[f64; 2]; 2] {
        let j = &self.jacobian;
        let r = 1.0 / self.det;
        [[j[1][1] * r, -j[0][1] * r], [-j[1][0] * r, j[0][0] * r]]
    }

    pub fn diameter(&self) -> f64 {
        let d = |a: [f64; 2], b: [f64; 2]| ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt();
        let [a, b, c] = self.coords;
        d(a, b).max(d(b, c)).max(d(a, c))
    }
}

/// Immutable periodic triangulation of `[0,1]²`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    vertices: Vec<[f64; 2]>,
    cells: Vec<[usize; 3]>,
    edges: Vec<[usize; 2]>,
    cell_edges: Vec<[usize; 3]>,
    cell_edge_signs: Vec<[f64; 3]>,
    edge_cells: Vec<[usize; 2]>,
    geometry: Vec<CellGeometry>,
}

fn wrap_unit(x: f64) -> f64 {
    let w = x - x.floor();
    if w >= 1.0 {
        0.0
    } else {
        w
    }
}

impl Mesh {
    /// Build a mesh from periodic vertex representatives and vertex triples.
    ///
    /// Cell geometry uses, per cell, the integer-shifted vertex copies that
    /// minimise the cell diameter. Triples may be given in either orientation;
    /// clockwise ones are flipped.
    pub fn from_cells(vertices: Vec<[f64; 2]>, cells: Vec<[usize; 3]>) -> Result<Self> {
        let vertices: Vec<[f64; 2]> = vertices
            .into_iter()
            .map(|[x, y]| [wrap_unit(x), wrap_unit(y)])
            .collect();
        let mut coords = Vec::with_capacity(cells.len());
        for (c, tri) in cells.iter().enumerate() {
            if tri.iter().any(|&v| v >= vertices.len()) {
                return Err(Error::Topology(format!(
                    "cell {c} references a missing vertex"
                )));
            }
            coords.push(unwrap_cell(&vertices, tri));
        }
        Self::from_parts(vertices, cells, coords)
    }

    /// Build a mesh where each cell also supplies the coordinates its geometry
    /// should use. Those must equal the vertex representatives up to integer
    /// shifts.
    pub fn from_parts(
        vertices: Vec<[f64; 2]>,
        cells: Vec<[usize; 3]>,
        cell_coords: Vec<[[f64; 2]; 3]>,
    ) -> Result<Self> {
        let vertices: Vec<[f64; 2]> = vertices
            .into_iter()
            .map(|[x, y]| [wrap_unit(x), wrap_unit(y)])
            .collect();
        let nv = vertices.len();
        if cell_coords.len() != cells.len() {
            return Err(Error::DimensionMismatch {
                expected: cells.len(),
                got: cell_coords.len(),
            });
        }

        let mut oriented = Vec::with_capacity(cells.len());
        let mut geometry = Vec::with_capacity(cells.len());
        let mut shifts = Vec::with_capacity(cells.len());
        for (c, (tri, xy)) in cells.into_iter().zip(cell_coords).enumerate() {
            if tri.iter().any(|&v| v >= nv) {
                return Err(Error::Topology(format!(
                    "cell {c} references a missing vertex"
                )));
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(Error::Topology(format!("cell {c} repeats a vertex")));
            }
            let mut shift = [[0i64; 2]; 3];
            for k in 0..3 {
                for d in 0..2 {
                    let s = xy[k][d] - vertices[tri[k]][d];
                    if (s - s.round()).abs() > 1e-9 {
                        return Err(Error::Topology(format!(
                            "cell {c} vertex {k} is not an integer shift of its representative"
                        )));
                    }
                    shift[k][d] = s.round() as i64;
                }
            }
            let (mut tri, mut xy) = (tri, xy);
            let mut geo = CellGeometry::from_coords(xy);
            if geo.det < 0.0 {
                tri.swap(1, 2);
                xy.swap(1, 2);
                shift.swap(1, 2);
                geo = CellGeometry::from_coords(xy);
            }
            if geo.det <= 0.0 {
                return Err(Error::DegenerateCell {
                    cell: c,
                    det: geo.det,
                });
            }
            oriented.push(tri);
            geometry.push(geo);
            shifts.push(shift);
        }

        // Edges are keyed by their endpoints plus the periodic image offset of
        // the high endpoint, so coarse meshes may join one vertex pair twice.
        let mut edge_index: HashMap<(usize, usize, [i64; 2]), usize> = HashMap::new();
        let mut edges = Vec::new();
        let mut edge_cells: Vec<Vec<usize>> = Vec::new();
        let mut cell_edges = Vec::with_capacity(oriented.len());
        let mut cell_edge_signs = Vec::with_capacity(oriented.len());
        for (c, tri) in oriented.iter().enumerate() {
            let mut ce = [0usize; 3];
            let mut cs = [0.0f64; 3];
            for (i, [a, b]) in LOCAL_EDGES.iter().enumerate() {
                let (va, vb) = (tri[*a], tri[*b]);
                let sh = &shifts[c];
                let offset = [sh[*b][0] - sh[*a][0], sh[*b][1] - sh[*a][1]];
                let key = if va < vb {
                    (va, vb, offset)
                } else {
                    (vb, va, [-offset[0], -offset[1]])
                };
                let e = *edge_index.entry(key).or_insert_with(|| {
                    edges.push([key.0, key.1]);
                    edge_cells.push(Vec::with_capacity(2));
                    edges.len() - 1
                });
                edge_cells[e].push(c);
                let same_direction = if va < vb { 1.0 } else { -1.0 };
                ce[i] = e;
                cs[i] = same_direction * LOCAL_OUTWARD_SIGN[i];
            }
            cell_edges.push(ce);
            cell_edge_signs.push(cs);
        }

        let mut pairs = Vec::with_capacity(edges.len());
        for (e, inc) in edge_cells.iter().enumerate() {
            if inc.len() != 2 || inc[0] == inc[1] {
                return Err(Error::Topology(format!(
                    "edge {e} ({:?}) has {} incident cells; a periodic mesh needs exactly 2 distinct",
                    edges[e],
                    inc.len()
                )));
            }
            pairs.push([inc[0], inc[1]]);
        }

        let mut used = vec![false; nv];
        for tri in &oriented {
            for &v in tri {
                used[v] = true;
            }
        }
        if let Some(v) = used.iter().position(|u| !u) {
            return Err(Error::Topology(format!(
                "vertex {v} is not used by any cell"
            )));
        }

        let euler = nv as i64 - edges.len() as i64 + oriented.len() as i64;
        if euler != 0 {
            return Err(Error::Topology(format!(
                "Euler characteristic V - E + F = {euler}, expected 0 for a torus"
            )));
        }

        let total_area: f64 = geometry.iter().map(|g| g.area).sum();
        if (total_area - 1.0).abs() > 1e-9 {
            return Err(Error::Topology(format!(
                "cell areas sum to {total_area}, cells do not tile the unit square"
            )));
        }

        Ok(Self {
            vertices,
            cells: oriented,
            edges,
            cell_edges,
            cell_edge_signs,
            edge_cells: pairs,
            geometry,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    pub fn cells(&self) -> &[[usize; 3]] {
        &self.cells
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn cell_edges(&self) -> &[[usize; 3]] {
        &self.cell_edges
    }

    /// Normal-orientation sign of each local edge (outward vs global normal).
    pub fn cell_edge_signs(&self) -> &[[f64; 3]] {
        &self.cell_edge_signs
    }

    pub fn edge_cells(&self) -> &[[usize; 2]] {
        &self.edge_cells
    }

    pub fn geometry(&self, cell: usize) -> &CellGeometry {
        &self.geometry[cell]
    }

    pub fn geometries(&self) -> &[CellGeometry] {
        &self.geometry
    }

    /// True when local edge `i` of `cell` runs against the global orientation.
    pub fn edge_reversed(&self, cell: usize, i: usize) -> bool {
        let [a, b] = LOCAL_EDGES[i];
        self.cells[cell][a] > self.cells[cell][b]
    }

    /// Local index of `edge` within `cell`, if incident.
    pub fn local_edge(&self, cell: usize, edge: usize) -> Option<usize> {
        self.cell_edges[cell].iter().position(|&e| e == edge)
    }

    pub fn total_area(&self) -> f64 {
        self.geometry.iter().map(|g| g.area).sum()
    }

    /// Largest cell diameter.
    pub fn max_diameter(&self) -> f64 {
        self.geometry
            .iter()
            .map(CellGeometry::diameter)
            .fold(0.0, f64::max)
    }
}

/// Copies of the cell's vertices shifted by integers to sit next to vertex 0.
fn unwrap_cell(vertices: &[[f64; 2]], tri: &[usize; 3]) -> [[f64; 2]; 3] {
    let p0 = vertices[tri[0]];
    let mut out = [p0; 3];
    for k in 1..3 {
        let p = vertices[tri[k]];
        let dx = p[0] - p0[0];
        let dy = p[1] - p0[1];
        out[k] = [p0[0] + dx - dx.round(), p0[1] + dy - dy.round()];
    }
    out
}

/// Regular `n × n` mesh, each square split along its lower-left to
/// upper-right diagonal.
pub fn structured_mesh(n: usize) -> Result<Mesh> {
    if n < 3 {
        return Err(Error::MeshTooSmall(n));
    }
    let h = 1.0 / n as f64;
    let vertices = (0..n)
        .flat_map(|j| (0..n).map(move |i| [i as f64 * h, j as f64 * h]))
        .collect();
    let id = |i: usize, j: usize| (j % n) * n + (i % n);
    let xy = |i: usize, j: usize| [i as f64 * h, j as f64 * h];
    let mut cells = Vec::with_capacity(2 * n * n);
    let mut coords = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for i in 0..n {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            let (pa, pb, pc, pd) = (xy(i, j), xy(i + 1, j), xy(i + 1, j + 1), xy(i, j + 1));
            cells.push([a, b, c]);
            coords.push([pa, pb, pc]);
            cells.push([a, c, d]);
            coords.push([pa, pc, pd]);
        }
    }
    Mesh::from_parts(vertices, cells, coords)
}
