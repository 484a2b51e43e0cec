//! Experiment drivers: run, write artifacts, summarise.

use std::fs;
use std::path::{Path, PathBuf};

use swe_core::experiments::CONSERVATION_CG_TOL;
use swe_core::experiments::{
    balance, conservation, vortex, BalanceSetup, ConservationSetup, Physics, VortexSetup,
};
use swe_core::linalg::DEFAULT_TOL;
use swe_core::timeint::{run, BLOWUP_FACTOR};
use swe_core::Scheme;

use crate::config::{fmt_f64, Experiment, ExperimentConfig, MANIFEST_SECTION};
use crate::error::{CliError, CliResult};
use crate::output::{write_run_csv, write_table, write_vtk};

/// Paths written and human-readable summary lines.
#[derive(Debug, Default)]
pub struct Report {
    pub files: Vec<PathBuf>,
    pub lines: Vec<String>,
}

fn physics(cfg: &ExperimentConfig) -> Physics {
    Physics {
        f: cfg.f,
        g: cfg.g,
        apvm: cfg.apvm,
        tau: cfg.tau,
    }
}

/// Resolved configuration plus mesh, element and solver facts. The file is
/// itself a valid configuration that reproduces the run.
pub fn write_manifest(cfg: &ExperimentConfig, path: &Path) -> CliResult<()> {
    let mut ini = cfg.to_ini();
    let mut info = ini.with_section(Some(MANIFEST_SECTION));
    info.set("version", env!("CARGO_PKG_VERSION"))
        .set("element_family", cfg.family.name())
        .set(
            "quadrature_degree",
            cfg.family.quadrature_degree().to_string(),
        )
        .set("cg_tolerance", fmt_f64(cg_tolerance(cfg.experiment)))
        .set("cg_max_iterations", "ceil(10 sqrt(n))")
        .set("cg_preconditioner", "jacobi")
        .set("blowup_factor", fmt_f64(BLOWUP_FACTOR));
    for (i, spec) in cfg.meshes.iter().enumerate() {
        let mesh = spec.build()?;
        let t = swe_core::make_triple(mesh.clone(), cfg.family);
        info.set(
            format!("mesh{i}"),
            format!(
                "{spec}; vertices={} edges={} cells={} dim_e={} dim_s={} dim_v={}",
                mesh.num_vertices(),
                mesh.num_edges(),
                mesh.num_cells(),
                t.e.dim(),
                t.s.dim(),
                t.v.dim()
            ),
        );
    }
    ini.write_to_file(path).map_err(|e| CliError::io(path, e))
}

fn cg_tolerance(exp: Experiment) -> f64 {
    match exp {
        Experiment::Conservation => CONSERVATION_CG_TOL,
        _ => DEFAULT_TOL,
    }
}

pub fn execute(cfg: &ExperimentConfig) -> CliResult<Report> {
    fs::create_dir_all(&cfg.out).map_err(|e| CliError::io(&cfg.out, e))?;
    let mut report = Report::default();
    let manifest = cfg.out.join("manifest.ini");
    write_manifest(cfg, &manifest)?;
    report.files.push(manifest);
    match cfg.experiment {
        Experiment::Balance => exec_balance(cfg, &mut report)?,
        Experiment::Conservation => exec_conservation(cfg, &mut report)?,
        Experiment::Vortex => exec_vortex(cfg, &mut report)?,
        Experiment::Custom => exec_custom(cfg, &mut report)?,
    }
    Ok(report)
}

fn exec_balance(cfg: &ExperimentConfig, report: &mut Report) -> CliResult<()> {
    let table = balance(&BalanceSetup {
        family: cfg.family,
        meshes: cfg.meshes.clone(),
        physics: physics(cfg),
        dt: cfg.dt(),
        t_end: cfg.t_end,
    })?;
    let rows: Vec<Vec<String>> = table
        .rows
        .iter()
        .map(|r| {
            vec![
                r.mesh.clone(),
                r.cells.to_string(),
                r.dofs.to_string(),
                fmt_f64(r.dx),
                fmt_f64(r.err_u),
                fmt_f64(r.err_h),
            ]
        })
        .collect();
    let path = cfg.out.join("balance.csv");
    write_table(
        &path,
        &["mesh", "cells", "dofs", "dx", "err_u", "err_h"],
        &rows,
    )?;
    report.files.push(path);
    for (i, r) in table.rows.iter().enumerate() {
        let p = cfg.out.join(format!("diagnostics_{i}.csv"));
        write_run_csv(&p, &r.record)?;
        report.files.push(p);
        report.lines.push(format!(
            "{} cells={} err_u={:.3e} err_h={:.3e}",
            r.mesh, r.cells, r.err_u, r.err_h
        ));
    }
    let path = cfg.out.join("balance_slopes.csv");
    write_table(
        &path,
        &["slope_u_dx", "slope_h_dx", "slope_u_dof", "slope_h_dof"],
        &[[
            table.slope_u_dx,
            table.slope_h_dx,
            table.slope_u_dof,
            table.slope_h_dof,
        ]
        .map(fmt_f64)
        .to_vec()],
    )?;
    report.files.push(path);
    report.lines.push(format!(
        "slopes vs dx: u {:.3} h {:.3}; vs 1/sqrt(dofs): u {:.3} h {:.3}",
        table.slope_u_dx, table.slope_h_dx, table.slope_u_dof, table.slope_h_dof
    ));
    Ok(())
}

fn exec_conservation(cfg: &ExperimentConfig, report: &mut Report) -> CliResult<()> {
    let table = conservation(&ConservationSetup {
        family: cfg.family,
        mesh: cfg.meshes[0].clone(),
        physics: physics(cfg),
        dts: cfg.dts.clone(),
        t_end: cfg.t_end,
        ..ConservationSetup::new(cfg.family)
    })?;
    let rows: Vec<Vec<String>> = table
        .rows
        .iter()
        .map(|r| {
            vec![
                fmt_f64(r.dt),
                r.steps.to_string(),
                fmt_f64(r.energy_change),
                fmt_f64(r.enstrophy_change),
            ]
        })
        .collect();
    let path = cfg.out.join("conservation.csv");
    write_table(
        &path,
        &["dt", "steps", "energy_change", "enstrophy_change"],
        &rows,
    )?;
    report.files.push(path);
    for (i, r) in table.rows.iter().enumerate() {
        let p = cfg.out.join(format!("diagnostics_{i}.csv"));
        write_run_csv(&p, &r.record)?;
        report.files.push(p);
        report.lines.push(format!(
            "dt={:e} dE/E0={:.3e} dZ/Z0={:.3e}",
            r.dt, r.energy_change, r.enstrophy_change
        ));
    }
    let path = cfg.out.join("conservation_slopes.csv");
    write_table(
        &path,
        &["slope_energy", "slope_enstrophy"],
        &[vec![
            fmt_f64(table.slope_energy),
            fmt_f64(table.slope_enstrophy),
        ]],
    )?;
    report.files.push(path);
    report.lines.push(format!(
        "slopes vs dt: energy {:.3} enstrophy {:.3}",
        table.slope_energy, table.slope_enstrophy
    ));
    Ok(())
}

fn exec_vortex(cfg: &ExperimentConfig, report: &mut Report) -> CliResult<()> {
    let shape = match cfg.initial {
        swe_core::experiments::InitialCondition::Vortex(s) => s,
        _ => Default::default(),
    };
    let out = vortex(&VortexSetup {
        family: cfg.family,
        mesh: cfg.meshes[0].clone(),
        physics: physics(cfg),
        shape,
        dt: cfg.dt(),
        t_end: cfg.t_end,
        sample_every: cfg.sample_every,
        snapshot_times: cfg.snapshots.clone(),
    })?;
    let path = cfg.out.join("diagnostics.csv");
    write_run_csv(&path, &out.record)?;
    report.files.push(path);
    for snap in &out.snapshots {
        let p = cfg.out.join(format!("snapshot_t{:06.2}.vtk", snap.time));
        let mesh = snap.q.space().mesh().clone();
        write_vtk(
            &p,
            &mesh,
            &[("q", &snap.q), ("u", &snap.state.u), ("h", &snap.state.h)],
        )?;
        report.files.push(p);
    }
    if let (Some(a), Some(b)) = (out.record.first(), out.record.last()) {
        report.lines.push(format!(
            "t={} dE/E0={:.3e} dZ/Z0={:.3e} imbalance {:.3e} -> {:.3e}",
            b.time,
            (b.energy - a.energy) / a.energy,
            (b.enstrophy - a.enstrophy) / a.enstrophy,
            a.imbalance,
            b.imbalance
        ));
    }
    Ok(())
}

fn exec_custom(cfg: &ExperimentConfig, report: &mut Report) -> CliResult<()> {
    let mesh = cfg.meshes[0].build()?;
    let scheme = Scheme::new(mesh.clone(), cfg.family)?;
    let params = physics(cfg).params(cfg.dt());
    let init = cfg.initial.project(&scheme, cfg.f, cfg.g)?;
    let p = cfg.out.join("initial.vtk");
    write_vtk(&p, &mesh, &[("u", &init.u), ("h", &init.h)])?;
    report.files.push(p);
    let (fin, record) = run(
        &scheme,
        &init,
        &params,
        cfg.dt(),
        cfg.t_end,
        cfg.sample_every,
    )?;
    let path = cfg.out.join("diagnostics.csv");
    write_run_csv(&path, &record)?;
    report.files.push(path);
    let q = scheme.diagnose_q(&fin, &params)?;
    let p = cfg.out.join("final.vtk");
    write_vtk(&p, &mesh, &[("q", &q), ("u", &fin.u), ("h", &fin.h)])?;
    report.files.push(p);
    if let (Some(a), Some(b)) = (record.first(), record.last()) {
        report.lines.push(format!(
            "{} steps to t={}: dE/E0={:.3e} dZ/Z0={:.3e}",
            b.step,
            b.time,
            (b.energy - a.energy) / a.energy,
            (b.enstrophy - a.enstrophy) / a.enstrophy
        ));
    }
    Ok(())
}
