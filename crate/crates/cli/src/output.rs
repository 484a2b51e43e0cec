//! CSV diagnostics, legacy VTK snapshots and run manifests.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use swe_core::timeint::{RunRecord, Sample};
use swe_core::{Field, Mesh};

use crate::config::fmt_f64;
use crate::error::{CliError, CliResult};

pub const RUN_HEADER: [&str; 8] = [
    "step",
    "time",
    "energy",
    "enstrophy",
    "vorticity",
    "mass",
    "imbalance",
    "cg_iters_max",
];

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> CliError + '_ {
    move |e| CliError::io(path, e)
}

/// Write a table with a header row; numbers should already be formatted.
pub fn write_table(path: &Path, header: &[&str], rows: &[Vec<String>]) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    w.write_record(header).map_err(csv_err(path))?;
    for r in rows {
        w.write_record(r).map_err(csv_err(path))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn write_run_csv(path: &Path, record: &RunRecord) -> CliResult<()> {
    let rows: Vec<Vec<String>> = record
        .samples
        .iter()
        .map(|s| {
            vec![
                s.step.to_string(),
                fmt_f64(s.time),
                fmt_f64(s.energy),
                fmt_f64(s.enstrophy),
                fmt_f64(s.vorticity),
                fmt_f64(s.mass),
                fmt_f64(s.imbalance),
                s.cg_iters_max.to_string(),
            ]
        })
        .collect();
    write_table(path, &RUN_HEADER, &rows)
}

pub fn read_run_csv(path: &Path) -> CliResult<RunRecord> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err(path))?;
    let header = r.headers().map_err(csv_err(path))?;
    if header.iter().ne(RUN_HEADER) {
        return Err(CliError::io(path, format!("unexpected header {header:?}")));
    }
    let mut samples = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(csv_err(path))?;
        let bad = |col: usize| CliError::io(path, format!("row {}: bad column {col}", i + 1));
        let f = |col: usize| -> CliResult<f64> { rec[col].parse().map_err(|_| bad(col)) };
        let n = |col: usize| -> CliResult<usize> { rec[col].parse().map_err(|_| bad(col)) };
        samples.push(Sample {
            step: n(0)?,
            time: f(1)?,
            energy: f(2)?,
            enstrophy: f(3)?,
            vorticity: f(4)?,
            mass: f(5)?,
            imbalance: f(6)?,
            cg_iters_max: n(7)?,
        });
    }
    Ok(RunRecord { samples })
}

/// Reference points of each triangle split into four.
const SUB_POINTS: [[f64; 2]; 6] = [
    [0.0, 0.0],
    [1.0, 0.0],
    [0.0, 1.0],
    [0.5, 0.0],
    [0.5, 0.5],
    [0.0, 0.5],
];
const SUB_CELLS: [[usize; 3]; 4] = [[0, 3, 5], [3, 1, 4], [5, 4, 2], [3, 4, 5]];

/// Legacy ASCII unstructured grid. Every triangle is split into four with
/// its own six points, so discontinuous fields are drawn faithfully; fields
/// are written as point data and as sub-cell centroid data.
pub fn write_vtk(path: &Path, mesh: &Mesh, fields: &[(&str, &Field)]) -> CliResult<()> {
    let io = |e: std::io::Error| CliError::io(path, e);
    for (name, f) in fields {
        if name.is_empty() || name.contains(char::is_whitespace) {
            return Err(CliError::config(format!("bad VTK field name {name:?}")));
        }
        if !std::ptr::eq(f.space().mesh().as_ref(), mesh) {
            return Err(CliError::config(format!(
                "field {name} lives on another mesh"
            )));
        }
    }
    let nc = mesh.num_cells();
    let (np, ns) = (6 * nc, 4 * nc);
    let mut w = BufWriter::new(File::create(path).map_err(io)?);
    writeln!(w, "# vtk DataFile Version 3.0").map_err(io)?;
    writeln!(w, "shallow water fields").map_err(io)?;
    writeln!(w, "ASCII\nDATASET UNSTRUCTURED_GRID").map_err(io)?;
    writeln!(w, "POINTS {np} double").map_err(io)?;
    for c in 0..nc {
        let geo = mesh.geometry(c);
        let centroid = geo.map([1.0 / 3.0, 1.0 / 3.0]);
        let shift = [centroid[0].floor(), centroid[1].floor()];
        for xi in SUB_POINTS {
            let p = geo.map(xi);
            writeln!(w, "{} {} 0", p[0] - shift[0], p[1] - shift[1]).map_err(io)?;
        }
    }
    writeln!(w, "CELLS {ns} {}", 4 * ns).map_err(io)?;
    for c in 0..nc {
        for t in SUB_CELLS {
            let b = 6 * c;
            writeln!(w, "3 {} {} {}", b + t[0], b + t[1], b + t[2]).map_err(io)?;
        }
    }
    writeln!(w, "CELL_TYPES {ns}").map_err(io)?;
    for _ in 0..ns {
        writeln!(w, "5").map_err(io)?;
    }
    let centroids: Vec<[f64; 2]> = SUB_CELLS
        .iter()
        .map(|t| {
            let s = |k: usize| t.iter().map(|&i| SUB_POINTS[i][k]).sum::<f64>() / 3.0;
            [s(0), s(1)]
        })
        .collect();
    for (section, count, pts) in [
        ("POINT_DATA", np, &SUB_POINTS[..]),
        ("CELL_DATA", ns, &centroids[..]),
    ] {
        if fields.is_empty() {
            break;
        }
        writeln!(w, "{section} {count}").map_err(io)?;
        for (name, f) in fields {
            if f.space().is_vector() {
                writeln!(w, "VECTORS {name} double").map_err(io)?;
            } else {
                writeln!(w, "SCALARS {name} double 1\nLOOKUP_TABLE default").map_err(io)?;
            }
            for c in 0..nc {
                for &xi in pts {
                    if f.space().is_vector() {
                        let v = f.eval_vector(c, xi);
                        writeln!(w, "{} {} 0", v[0], v[1]).map_err(io)?;
                    } else {
                        writeln!(w, "{}", f.eval_scalar(c, xi)).map_err(io)?;
                    }
                }
            }
        }
    }
    w.flush().map_err(io)
}
