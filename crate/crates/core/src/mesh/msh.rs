//! gmsh MSH ASCII v2.2 input and output.
//!
//! Only 3-node triangles (element type 2) become cells. Points and line
//! elements are skipped; any other 2D or 3D element is rejected. Nodes on
//! `x = 1` and `y = 1` are identified with their partners on `x = 0` and
//! `y = 0`, which must exist within [`PERIODIC_TOL`].

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use super::Mesh;
use crate::error::{Error, Result};

pub const PERIODIC_TOL: f64 = 1e-8;

/// gmsh element types with dimension below 2: points and (higher-order) lines.
const SKIPPED_TYPES: [usize; 5] = [1, 8, 15, 26, 27];
const TRIANGLE: usize = 2;

pub fn read_msh(path: impl AsRef<Path>) -> Result<Mesh> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    parse_msh(&text)
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            inner: text.lines().enumerate(),
            last: 0,
        }
    }

    fn next_nonempty(&mut self) -> Option<&'a str> {
        for (i, line) in self.inner.by_ref() {
            self.last = i + 1;
            let t = line.trim();
            if !t.is_empty() {
                return Some(t);
            }
        }
        None
    }

    fn expect(&mut self, what: &str) -> Result<&'a str> {
        let line = self.last + 1;
        self.next_nonempty().ok_or_else(|| Error::MshParse {
            line,
            message: format!("unexpected end of file, expected {what}"),
        })
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::MshParse {
            line: self.last,
            message: message.into(),
        }
    }
}

fn parse_num<T: std::str::FromStr>(lines: &Lines, tok: Option<&str>, what: &str) -> Result<T> {
    tok.and_then(|t| t.parse().ok())
        .ok_or_else(|| lines.err(format!("expected {what}")))
}

pub fn parse_msh(text: &str) -> Result<Mesh> {
    let mut lines = Lines::new(text);
    let mut nodes: Option<Vec<(usize, [f64; 2])>> = None;
    let mut triangles: Option<Vec<[usize; 3]>> = None;
    let mut saw_format = false;

    while let Some(header) = lines.next_nonempty() {
        match header {
            "$MeshFormat" => {
                let fmt = lines.expect("format line")?;
                let mut tok = fmt.split_whitespace();
                let version = tok.next().unwrap_or("");
                if version != "2.2" {
                    return Err(lines.err(format!("unsupported MSH version {version:?}, need 2.2")));
                }
                let file_type: usize = parse_num(&lines, tok.next(), "file type")?;
                if file_type != 0 {
                    return Err(lines.err("binary MSH files are not supported"));
                }
                end_section(&mut lines, "$EndMeshFormat")?;
                saw_format = true;
            }
            "$Nodes" => {
                let text = lines.expect("node count")?;
                let count: usize = parse_num(&lines, Some(text), "node count")?;
                let mut list = Vec::with_capacity(count);
                for _ in 0..count {
                    let line = lines.expect("node")?;
                    let mut tok = line.split_whitespace();
                    let id: usize = parse_num(&lines, tok.next(), "node id")?;
                    let x: f64 = parse_num(&lines, tok.next(), "x coordinate")?;
                    let y: f64 = parse_num(&lines, tok.next(), "y coordinate")?;
                    list.push((id, [x, y]));
                }
                end_section(&mut lines, "$EndNodes")?;
                nodes = Some(list);
            }
            "$Elements" => {
                let count: usize = {
                    let text = lines.expect("element count")?;
                    parse_num(&lines, Some(text), "element count")?
                };
                let mut list = Vec::new();
                for _ in 0..count {
                    let line = lines.expect("element")?;
                    let tok: Vec<&str> = line.split_whitespace().collect();
                    let id: usize = parse_num(&lines, tok.first().copied(), "element id")?;
                    let ty: usize = parse_num(&lines, tok.get(1).copied(), "element type")?;
                    let ntags: usize = parse_num(&lines, tok.get(2).copied(), "tag count")?;
                    if SKIPPED_TYPES.contains(&ty) {
                        continue;
                    }
                    if ty != TRIANGLE {
                        return Err(Error::NonTriangleElement {
                            id,
                            element_type: ty,
                        });
                    }
                    let start = 3 + ntags;
                    if tok.len() != start + 3 {
                        return Err(lines.err(format!("triangle {id} needs exactly 3 nodes")));
                    }
                    let mut tri = [0usize; 3];
                    for (k, t) in tri.iter_mut().enumerate() {
                        *t = parse_num(&lines, Some(tok[start + k]), "node reference")?;
                    }
                    list.push(tri);
                }
                end_section(&mut lines, "$EndElements")?;
                triangles = Some(list);
            }
            other if other.starts_with('$') && !other.starts_with("$End") => {
                let closing = format!("$End{}", &other[1..]);
                loop {
                    let l = lines.expect(&closing)?;
                    if l == closing {
                        break;
                    }
                }
            }
            other => return Err(lines.err(format!("unexpected line {other:?}"))),
        }
    }

    if !saw_format {
        return Err(Error::MshParse {
            line: 1,
            message: "missing $MeshFormat section".into(),
        });
    }
    let nodes = nodes.ok_or_else(|| lines.err("missing $Nodes section"))?;
    let triangles = triangles.ok_or_else(|| lines.err("missing $Elements section"))?;
    if triangles.is_empty() {
        return Err(lines.err("no triangle elements"));
    }
    build_periodic(&nodes, &triangles)
}

fn end_section(lines: &mut Lines, closing: &str) -> Result<()> {
    let l = lines.expect(closing)?;
    if l != closing {
        return Err(lines.err(format!("expected {closing}, found {l:?}")));
    }
    Ok(())
}

fn build_periodic(nodes: &[(usize, [f64; 2])], triangles: &[[usize; 3]]) -> Result<Mesh> {
    let by_id: HashMap<usize, [f64; 2]> = nodes.iter().copied().collect();
    let mut referenced: Vec<usize> = triangles.iter().flatten().copied().collect();
    referenced.sort_unstable();
    referenced.dedup();
    for id in &referenced {
        if !by_id.contains_key(id) {
            return Err(Error::MshParse {
                line: 0,
                message: format!("element references undefined node {id}"),
            });
        }
    }

    let near = |a: f64, b: f64| (a - b).abs() <= PERIODIC_TOL;
    let is_high = |p: [f64; 2]| near(p[0], 1.0) || near(p[1], 1.0);

    // Representatives: every referenced node not on the x = 1 or y = 1 side.
    let mut rep_index: HashMap<usize, usize> = HashMap::new();
    let mut vertices = Vec::new();
    let mut low_boundary = Vec::new();
    for &id in &referenced {
        let p = by_id[&id];
        if !is_high(p) {
            rep_index.insert(id, vertices.len());
            if near(p[0], 0.0) || near(p[1], 0.0) {
                low_boundary.push((vertices.len(), p));
            }
            vertices.push(p);
        }
    }
    for &id in &referenced {
        let p = by_id[&id];
        if !is_high(p) {
            continue;
        }
        let target = [
            if near(p[0], 1.0) { 0.0 } else { p[0] },
            if near(p[1], 1.0) { 0.0 } else { p[1] },
        ];
        let partner = low_boundary
            .iter()
            .find(|(_, q)| near(q[0], target[0]) && near(q[1], target[1]))
            .map(|(v, _)| *v)
            .ok_or(Error::UnmatchedBoundaryVertex {
                id,
                x: p[0],
                y: p[1],
                tol: PERIODIC_TOL,
            })?;
        rep_index.insert(id, partner);
    }

    let cells = triangles
        .iter()
        .map(|t| [rep_index[&t[0]], rep_index[&t[1]], rep_index[&t[2]]])
        .collect();
    // Snap identified coordinates so they are exact integer shifts.
    let coords = triangles
        .iter()
        .map(|t| {
            let mut xy = [[0.0; 2]; 3];
            for k in 0..3 {
                let p = by_id[&t[k]];
                let r = vertices[rep_index[&t[k]]];
                for d in 0..2 {
                    xy[k][d] = r[d] + (p[d] - r[d]).round();
                }
            }
            xy
        })
        .collect();
    Mesh::from_parts(vertices, cells, coords)
}

/// Serialise as a non-periodic conforming triangulation of `[0,1]²`.
///
/// Every cell is shifted by whole periods to lie inside the unit square and
/// vertex images on `x = 1` / `y = 1` become separate nodes, so that
/// [`parse_msh`] reproduces the same periodic mesh.
pub fn to_msh_string(mesh: &Mesh) -> Result<String> {
    const EPS: f64 = 1e-12;
    let mut node_ids: HashMap<(usize, i64, i64), usize> = HashMap::new();
    let mut nodes: Vec<[f64; 2]> = Vec::new();
    let mut elements = Vec::with_capacity(mesh.num_cells());
    for (c, tri) in mesh.cells().iter().enumerate() {
        let xy = mesh.geometry(c).coords;
        let min_x = xy.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
        let min_y = xy.iter().map(|p| p[1]).fold(f64::INFINITY, f64::min);
        let sx = -(min_x + EPS).floor();
        let sy = -(min_y + EPS).floor();
        let mut ids = [0usize; 3];
        for k in 0..3 {
            let p = [xy[k][0] + sx, xy[k][1] + sy];
            if p[0] > 1.0 + EPS || p[1] > 1.0 + EPS {
                return Err(Error::Topology(format!(
                    "cell {c} straddles the periodic seam and cannot be written"
                )));
            }
            let r = mesh.vertices()[tri[k]];
            let key = (
                tri[k],
                (p[0] - r[0]).round() as i64,
                (p[1] - r[1]).round() as i64,
            );
            ids[k] = *node_ids.entry(key).or_insert_with(|| {
                nodes.push([r[0] + key.1 as f64, r[1] + key.2 as f64]);
                nodes.len()
            });
        }
        elements.push(ids);
    }

    let mut out = String::new();
    out.push_str("$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n");
    let _ = writeln!(out, "{}", nodes.len());
    for (i, p) in nodes.iter().enumerate() {
        let _ = writeln!(out, "{} {:?} {:?} 0", i + 1, p[0], p[1]);
    }
    out.push_str("$EndNodes\n$Elements\n");
    let _ = writeln!(out, "{}", elements.len());
    for (i, t) in elements.iter().enumerate() {
        let _ = writeln!(out, "{} 2 2 1 1 {} {} {}", i + 1, t[0], t[1], t[2]);
    }
    out.push_str("$EndElements\n");
    Ok(out)
}

pub fn write_msh(mesh: &Mesh, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = to_msh_string(mesh)?;
    std::fs::write(path, text).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}
