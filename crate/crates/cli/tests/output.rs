use std::sync::Arc;

use swe_cli::output::{read_run_csv, write_run_csv, write_vtk, RUN_HEADER};
use swe_core::fem::{ElementKind, FunctionSpace};
use swe_core::timeint::{RunRecord, Sample};
use swe_core::{structured_mesh, Field};

fn awkward_record() -> RunRecord {
    let vals = [
        0.1 + 0.2,
        1.0 / 3.0,
        -2.5e-300,
        f64::MIN_POSITIVE,
        123456789.12345679,
        -0.0,
        1e22,
        std::f64::consts::PI,
    ];
    RunRecord {
        samples: (0..vals.len())
            .map(|i| Sample {
                step: i * 7,
                time: vals[i] * 0.5,
                energy: vals[i],
                enstrophy: vals[(i + 1) % 8],
                vorticity: vals[(i + 2) % 8],
                mass: vals[(i + 3) % 8],
                imbalance: vals[(i + 4) % 8].abs(),
                cg_iters_max: 40 + i,
            })
            .collect(),
    }
}

#[test]
fn csv_round_trip_is_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.csv");
    let rec = awkward_record();
    write_run_csv(&path, &rec).unwrap();
    let back = read_run_csv(&path).unwrap();
    assert_eq!(back.len(), rec.len());
    for (a, b) in rec.samples.iter().zip(&back.samples) {
        assert_eq!(a.step, b.step);
        assert_eq!(a.cg_iters_max, b.cg_iters_max);
        for (x, y) in [
            (a.time, b.time),
            (a.energy, b.energy),
            (a.enstrophy, b.enstrophy),
            (a.vorticity, b.vorticity),
            (a.mass, b.mass),
            (a.imbalance, b.imbalance),
        ] {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }
}

#[test]
fn empty_record_writes_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("e.csv");
    write_run_csv(&path, &RunRecord::default()).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text, format!("{}\n", RUN_HEADER.join(",")));
    assert!(read_run_csv(&path).unwrap().is_empty());
}

#[test]
fn rejects_wrong_header() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.csv");
    std::fs::write(&path, "a,b\n1,2\n").unwrap();
    assert!(read_run_csv(&path).is_err());
}

fn vtk_section<'a>(text: &'a str, header: &str) -> Vec<&'a str> {
    let start = text.find(header).unwrap();
    text[start..]
        .lines()
        .skip(1)
        .take_while(|l| {
            !l.starts_with("CELL_DATA")
                && !l.starts_with("POINT_DATA")
                && !l.starts_with("SCALARS")
                && !l.starts_with("VECTORS")
        })
        .filter(|l| !l.starts_with("LOOKUP_TABLE"))
        .collect()
}

#[test]
fn constant_dg0_field_gives_constant_cell_data() {
    let mesh = Arc::new(structured_mesh(3).unwrap());
    let space = Arc::new(FunctionSpace::new(mesh.clone(), ElementKind::Dg0));
    let field = Field::new(space.clone(), vec![2.5; space.dim()]).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.vtk");
    write_vtk(&path, &mesh, &[("h", &field)]).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# vtk DataFile Version 3.0"));
    assert!(text.contains(&format!("CELLS {} {}", 4 * 18, 16 * 18)));
    assert!(text.contains(&format!("CELL_DATA {}", 4 * 18)));
    let cell_data = &text[text.find("CELL_DATA").unwrap()..];
    let cell_vals = vtk_section(cell_data, "SCALARS h double 1");
    assert_eq!(cell_vals.len(), 4 * 18);
    assert!(cell_vals.iter().all(|l| l.trim() == "2.5"));
}

#[test]
fn vectors_have_three_components_and_points_lie_in_the_domain() {
    let mesh = Arc::new(structured_mesh(3).unwrap());
    let space = Arc::new(FunctionSpace::new(mesh.clone(), ElementKind::Rt0));
    let field = Field::new(space.clone(), (0..space.dim()).map(|i| i as f64).collect()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v.vtk");
    write_vtk(&path, &mesh, &[("u", &field)]).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let vecs = vtk_section(&text, "VECTORS u double");
    assert_eq!(vecs.len(), 6 * 18);
    assert!(vecs
        .iter()
        .all(|l| l.split_whitespace().count() == 3 && l.ends_with(" 0")));
    let pts = vtk_section(&text, "POINTS");
    for p in pts.iter().take(6 * 18) {
        let c: Vec<f64> = p.split_whitespace().map(|v| v.parse().unwrap()).collect();
        assert!(c[0] > -1e-12 && c[0] < 1.0 + 1.0 / 3.0 + 1e-12);
        assert!(c[1] > -1e-12 && c[1] < 1.0 + 1.0 / 3.0 + 1e-12);
    }
}

#[test]
fn rejects_field_from_another_mesh() {
    let a = Arc::new(structured_mesh(3).unwrap());
    let b = Arc::new(structured_mesh(3).unwrap());
    let space = Arc::new(FunctionSpace::new(b, ElementKind::Dg0));
    let field = Field::zeros(space);
    let dir = tempfile::tempdir().unwrap();
    assert!(write_vtk(&dir.path().join("x.vtk"), &a, &[("h", &field)]).is_err());
}
