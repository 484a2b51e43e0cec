//! Acceptance criteria. Every test writes one `PASS` or `FAIL` line to
//! stderr (bypassing the test harness capture) before asserting.

mod common;

use std::f64::consts::PI;
use std::io::Write;
use std::sync::Arc;

use common::{mesh_path, random_state, scheme, structured, unstructured};
use nalgebra::{DMatrix, DVector};
use swe_core::experiments::{
    balance, conservation, vortex, BalanceSetup, ConservationSetup, InitialCondition, MeshSpec,
    Physics, VortexSetup, CONSERVATION_CG_TOL,
};
use swe_core::fem::{l2_project, triangle_quadrature, ElementFamily, Source};
use swe_core::linalg::CgOptions;
use swe_core::swe::{assemble_div, assemble_perp_grad_embedding, Params, Scheme, State};
use swe_core::timeint::run;
use swe_core::{Field, FunctionSpace};

fn report(id: u32, name: &str, pass: bool, detail: &str) {
    let line = format!(
        "{} criterion {id} ({name}): {detail}\n",
        if pass { "PASS" } else { "FAIL" }
    );
    let _ = std::io::stderr().write_all(line.as_bytes());
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[test]
fn criterion_1_exact_sequence() {
    let meshes = [
        ("n=8", structured(8)),
        ("periodic_8.msh", unstructured("periodic_8.msh")),
    ];
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for (name, mesh) in &meshes {
        for fam in ElementFamily::ALL {
            let t = swe_core::make_triple(mesh.clone(), fam);
            let dc = assemble_div(&t.s, &t.v).matmul(&assemble_perp_grad_embedding(&t.e, &t.s));
            worst = worst.max(dc.max_abs());
            parts.push(format!("{name}/{fam} {:.1e}", dc.max_abs()));
        }
    }
    let pass = worst <= 1e-12;
    report(
        1,
        "D C = 0",
        pass,
        &format!("max |D C| = {worst:.2e} <= 1e-12 [{}]", parts.join(", ")),
    );
    assert!(pass);
}

#[test]
fn criterion_2_commuting_projection() {
    let vel = |p: [f64; 2]| {
        let (x, y) = (2.0 * PI * p[0], 2.0 * PI * p[1]);
        [y.sin() * x.cos(), (2.0 * x).sin() * y.cos()]
    };
    // ∂x v - ∂y u
    let curl = |p: [f64; 2]| {
        let (x, y) = (2.0 * PI * p[0], 2.0 * PI * p[1]);
        2.0 * PI * (2.0 * (2.0 * x).cos() * y.cos() - y.cos() * x.cos())
    };
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for fam in ElementFamily::ALL {
        let s = scheme(structured(8), fam);
        let u = l2_project(Source::Vector(&vel), s.s()).unwrap();
        let lhs = s.weak_curl(&u).unwrap();
        let rhs = l2_project(Source::Scalar(&curl), s.e()).unwrap();
        let d = max_abs_diff(lhs.coeffs(), rhs.coeffs());
        worst = worst.max(d);
        parts.push(format!("{fam} {d:.1e}"));
    }
    let pass = worst <= 1e-9;
    report(
        2,
        "wcurl(P_S v) = P_E(curl v)",
        pass,
        &format!(
            "max coefficient difference {worst:.2e} <= 1e-9 [{}]",
            parts.join(", ")
        ),
    );
    assert!(pass);
}

/// `(|rate|, scale)` of the energy budget, the scale being the sum of the
/// kinetic and potential exchange magnitudes.
fn energy_budget(s: &Scheme, st: &State, p: &Params) -> ((f64, f64), (f64, f64)) {
    let t = s.tendency(st, p).unwrap();
    let total = s.energy_rate(st, p, &t);
    let kinetic = dot(&t.flux, &s.mass_s().matvec(&t.du));
    let e = (total, kinetic.abs() + (total - kinetic).abs());
    let z = s.enstrophy_rate(&t);
    let vortical = -2.0 * dot(&s.perp_grad().matvec(&t.q), &s.mass_s().matvec(&t.du));
    (e, (z, vortical.abs() + (z - vortical).abs()))
}

#[test]
fn criterion_3_semi_discrete_conservation() {
    let (mut e_max, mut z_max, mut ea_max, mut za_max) = (0.0f64, 0.0f64, 0.0f64, f64::MIN);
    let cg = CgOptions {
        tol: CONSERVATION_CG_TOL,
        maxit: None,
    };
    for fam in ElementFamily::ALL {
        let s = Scheme::with_options(structured(8), fam, cg).unwrap();
        for seed in 0..10 {
            let st = random_state(&s, 1000 + seed);
            let ((e, es), (z, zs)) = energy_budget(&s, &st, &Params::new(5.0, 5.0));
            e_max = e_max.max(e.abs() / es);
            z_max = z_max.max(z.abs() / zs);
            let p = Params::new(5.0, 5.0).with_apvm(1e-2);
            let ((e, es), (z, zs)) = energy_budget(&s, &st, &p);
            ea_max = ea_max.max(e.abs() / es);
            za_max = za_max.max(z / zs);
        }
    }
    let pass = e_max <= 1e-9 && z_max <= 1e-9 && ea_max <= 1e-9 && za_max <= 1e-9;
    report(
        3,
        "semi-discrete conservation",
        pass,
        &format!(
            "40 states: |dE/dt| {e_max:.1e}, |dZ/dt| {z_max:.1e} <= 1e-9 rel; \
             APVM tau=1e-2: |dE/dt| {ea_max:.1e} <= 1e-9 rel, max dZ/dt {za_max:.1e} <= 1e-9 rel"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_4_balanced_state_convergence() {
    let mut pass = true;
    let mut parts = Vec::new();
    for fam in ElementFamily::ALL {
        let min = match fam {
            ElementFamily::Rt0 | ElementFamily::Bdm1 => 1.8,
            _ => 2.5,
        };
        let t = balance(&BalanceSetup::new(fam)).unwrap();
        let ok = t.slope_u_dx >= min && t.slope_h_dx >= min;
        pass &= ok;
        parts.push(format!(
            "{fam} u {:.2} h {:.2} (>= {min}){}",
            t.slope_u_dx,
            t.slope_h_dx,
            if ok { "" } else { " FAIL" }
        ));
    }
    report(
        4,
        "balanced-state convergence, n=8,16,32, dt=5e-4, t=1",
        pass,
        &format!("slopes vs dx: {}", parts.join("; ")),
    );
    assert!(pass);
}

#[test]
fn criterion_5_conservation_order() {
    let mut pass = true;
    let mut parts = Vec::new();
    for fam in ElementFamily::ALL {
        let setup = ConservationSetup {
            t_end: 0.25,
            ..ConservationSetup::new(fam)
        };
        let t = conservation(&setup).unwrap();
        let ok = (t.slope_enstrophy - 4.0).abs() <= 0.5 && t.slope_energy >= 4.0;
        let mut apvm = setup.clone();
        apvm.physics.apvm = true;
        let ta = conservation(&apvm).unwrap();
        let ok_a = (ta.slope_enstrophy - 1.0).abs() <= 0.3;
        pass &= ok && ok_a;
        parts.push(format!(
            "{fam} Z {:.2} E {:.2} Z_apvm {:.2}{}",
            t.slope_enstrophy,
            t.slope_energy,
            ta.slope_enstrophy,
            if ok && ok_a { "" } else { " FAIL" }
        ));
    }
    report(
        5,
        "conservation order in dt, n=16, t=0.25",
        pass,
        &format!(
            "Z slope 4±0.5, E slope >= 4, APVM Z slope 1±0.3: {}",
            parts.join("; ")
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_6_mass_and_vorticity() {
    let (mut dm, mut dv) = (0.0f64, 0.0f64);
    for fam in ElementFamily::ALL {
        let s = scheme(structured(8), fam);
        let phys = Physics {
            f: 5.0,
            g: 5.0,
            apvm: true,
            tau: None,
        };
        let dt = 1e-3;
        let init = InitialCondition::Conservation
            .project(&s, phys.f, phys.g)
            .unwrap();
        let (_, rec) = run(&s, &init, &phys.params(dt), dt, 500.0 * dt, 1).unwrap();
        assert_eq!(rec.last().unwrap().step, 500);
        let m0 = rec.first().unwrap().mass;
        let v0 = rec.first().unwrap().vorticity;
        for smp in &rec.samples {
            dm = dm.max((smp.mass - m0).abs() / m0.abs());
            dv = dv.max((smp.vorticity - v0).abs() / v0.abs());
        }
    }
    let pass = dm <= 1e-12 && dv <= 1e-10;
    report(
        6,
        "mass and total vorticity over 500 steps",
        pass,
        &format!("max rel drift: mass {dm:.1e} <= 1e-12, vorticity {dv:.1e} <= 1e-10"),
    );
    assert!(pass);
}

/// Magnitudes of the three bracket terms, for relative tolerances.
fn bracket_scale(s: &Scheme, a: &State, b: &State, q: &Field) -> f64 {
    let zu = Field::zeros(s.s().clone());
    let zh = Field::zeros(s.v().clone());
    s.bracket(&a.u, &zh, &b.u, &zh, q).abs()
        + s.bracket(&a.u, &zh, &zu, &b.h, q).abs()
        + s.bracket(&zu, &a.h, &b.u, &zh, q).abs()
}

#[test]
fn criterion_7_bracket_properties() {
    let mut anti: f64 = 0.0;
    let mut cas: f64 = 0.0;
    for i in 0..20u64 {
        let fam = ElementFamily::ALL[(i % 4) as usize];
        let s = scheme(structured(4), fam);
        let a = random_state(&s, 3 * i);
        let b = random_state(&s, 3 * i + 1);
        let q = s
            .diagnose_q(&random_state(&s, 3 * i + 2), &Params::new(2.0, 1.0))
            .unwrap();
        let ab = s.bracket(&a.u, &a.h, &b.u, &b.h, &q);
        let ba = s.bracket(&b.u, &b.h, &a.u, &a.h, &q);
        anti = anti.max((ab + ba).abs() / bracket_scale(&s, &a, &b, &q));
    }
    for i in 0..5u64 {
        let fam = ElementFamily::ALL[(i % 4) as usize];
        let s = scheme(structured(4), fam);
        let st = random_state(&s, 500 + i);
        let q = s.diagnose_q(&st, &Params::new(4.0, 1.0)).unwrap();
        let (cu, ch) = s.enstrophy_variations(&q).unwrap();
        let c = State::new(cu, ch, 0.0).unwrap();
        let g = random_state(&s, 600 + i);
        let v = s.bracket(&c.u, &c.h, &g.u, &g.h, &q);
        cas = cas.max(v.abs() / bracket_scale(&s, &c, &g, &q));
    }
    let pass = anti <= 1e-12 && cas <= 1e-10;
    report(
        7,
        "bracket antisymmetry and enstrophy Casimir",
        pass,
        &format!(
            "20 pairs |{{F,G}}+{{G,F}}| {anti:.1e} <= 1e-12 rel; 5 G |{{C,G}}| {cas:.1e} <= 1e-10 rel"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_8_vortex_regression() {
    let mesh = MeshSpec::Msh(mesh_path("periodic_16.msh").into());
    let cells = mesh.build().unwrap().num_cells();
    let rel = |a: f64, b: f64| (b - a) / a;
    let mut setup = VortexSetup::new(mesh);
    setup.snapshot_times.clear();
    let plain = vortex(&setup).unwrap().record;
    setup.physics.apvm = true;
    let apvm = vortex(&setup).unwrap().record;
    let mut half = setup.clone();
    half.physics.apvm = false;
    half.dt /= 2.0;
    half.sample_every *= 2;
    let plain_half = vortex(&half).unwrap().record;

    let (a0, a1) = (apvm.first().unwrap(), apvm.last().unwrap());
    let decay = -rel(a0.enstrophy, a1.enstrophy);
    // enstrophy about the mean PV, ∫ (q - q̄)² h = Z - (∫ q h)² / ∫ h
    let available = |s: &swe_core::Sample| s.enstrophy - s.vorticity * s.vorticity / s.mass;
    let decay_available = -rel(available(a0), available(a1));
    let de = rel(a0.energy, a1.energy).abs();
    let dz = rel(
        plain.first().unwrap().enstrophy,
        plain.last().unwrap().enstrophy,
    )
    .abs();
    let dz_half = rel(
        plain_half.first().unwrap().enstrophy,
        plain_half.last().unwrap().enstrophy,
    )
    .abs();
    // Timestepping error shrinks with dt; anything else would not.
    let timestep_error = dz <= 1e-12 || dz / dz_half >= 8.0;
    let pass = decay >= 0.01 && de <= 1e-6 && timestep_error && dz < 1e-2 * decay;
    report(
        8,
        "vortex, BDM1, periodic_16.msh, t=8",
        pass,
        &format!(
            "{cells} cells; APVM enstrophy decay {decay:.2e} >= 1e-2, |dE/E0| {de:.1e} <= 1e-6; \
             no APVM |dZ/Z0| {dz:.1e} at dt, {dz_half:.1e} at dt/2 (<= 1e-12 or ratio >= 8, \
             < 1e-2 x APVM decay); APVM decay of enstrophy about the mean PV {decay_available:.2e}"
        ),
    );
    assert!(pass);
}

/// Unit coefficient vectors of every global basis function.
fn basis(space: &Arc<FunctionSpace>) -> Vec<Field> {
    (0..space.dim())
        .map(|i| {
            let mut c = vec![0.0; space.dim()];
            c[i] = 1.0;
            Field::new(space.clone(), c).unwrap()
        })
        .collect()
}

fn cell_dofs(space: &FunctionSpace, c: usize) -> Vec<usize> {
    let mut d = space.dofs(c).to_vec();
    d.sort_unstable();
    d.dedup();
    d
}

fn dense_solve(m: DMatrix<f64>, b: DVector<f64>) -> Vec<f64> {
    m.lu().solve(&b).unwrap().as_slice().to_vec()
}

/// Brute-force `q`, `F`, `u_t`, `h_t`: global basis functions evaluated one
/// at a time, dense matrices, a finer quadrature rule and a direct solve.
fn dense_oracle(s: &Scheme, st: &State, p: &Params) -> [Vec<f64>; 4] {
    let mesh = s.mesh();
    let rule = triangle_quadrature(s.family().quadrature_degree() + 4).unwrap();
    let (be, bs, bv) = (basis(s.e()), basis(s.s()), basis(s.v()));
    let (ne, ns, nv) = (be.len(), bs.len(), bv.len());
    let tau = p.effective_tau();
    let points = |c: usize| {
        let geo = mesh.geometry(c);
        rule.points
            .iter()
            .zip(&rule.weights)
            .map(move |(&xi, &w)| (xi, w * geo.det.abs(), geo.map(xi)))
    };

    let mut me = DMatrix::zeros(ne, ne);
    let mut bq = DVector::zeros(ne);
    let mut ms = DMatrix::zeros(ns, ns);
    let mut bf = DVector::zeros(ns);
    for c in 0..mesh.num_cells() {
        let (de, ds) = (cell_dofs(s.e(), c), cell_dofs(s.s(), c));
        for (xi, w, x) in points(c) {
            let h = st.h.eval_scalar(c, xi);
            let u = st.u.eval_vector(c, xi);
            let f = p.coriolis.at(x);
            for &i in &de {
                let (gi, gg) = (be[i].eval_scalar(c, xi), be[i].eval_gradient(c, xi));
                // -∇⊥γ = (γ_y, -γ_x)
                bq[i] += w * (gg[1] * u[0] - gg[0] * u[1] + gi * f);
                for &j in &de {
                    me[(i, j)] += w * h * gi * be[j].eval_scalar(c, xi);
                }
            }
            for &i in &ds {
                let wi = bs[i].eval_vector(c, xi);
                bf[i] += w * h * (wi[0] * u[0] + wi[1] * u[1]);
                for &j in &ds {
                    let wj = bs[j].eval_vector(c, xi);
                    ms[(i, j)] += w * (wi[0] * wj[0] + wi[1] * wj[1]);
                }
            }
        }
    }
    let q = Field::new(s.e().clone(), dense_solve(me, bq)).unwrap();
    let flux = Field::new(s.s().clone(), dense_solve(ms.clone(), bf)).unwrap();

    let mut bu = DVector::zeros(ns);
    let mut mv = DMatrix::zeros(nv, nv);
    let mut bh = DVector::zeros(nv);
    for c in 0..mesh.num_cells() {
        let (ds, dv) = (cell_dofs(s.s(), c), cell_dofs(s.v(), c));
        for (xi, w, _) in points(c) {
            let h = st.h.eval_scalar(c, xi);
            let u = st.u.eval_vector(c, xi);
            let gq = q.eval_gradient(c, xi);
            let qs = q.eval_scalar(c, xi) - tau * (u[0] * gq[0] + u[1] * gq[1]);
            let fv = flux.eval_vector(c, xi);
            let bern = p.g * h + 0.5 * (u[0] * u[0] + u[1] * u[1]);
            for &i in &ds {
                let wi = bs[i].eval_vector(c, xi);
                // w·F⊥ = -w_x F_y + w_y F_x
                let wf = -wi[0] * fv[1] + wi[1] * fv[0];
                bu[i] += w * (-qs * wf + bs[i].eval_divergence(c, xi) * bern);
            }
            let divf = flux.eval_divergence(c, xi);
            for &i in &dv {
                let vi = bv[i].eval_scalar(c, xi);
                bh[i] -= w * vi * divf;
                for &j in &dv {
                    mv[(i, j)] += w * vi * bv[j].eval_scalar(c, xi);
                }
            }
        }
    }
    [
        q.into_coeffs(),
        flux.into_coeffs(),
        dense_solve(ms, bu),
        dense_solve(mv, bh),
    ]
}

fn rel_diff(a: &[f64], b: &[f64]) -> f64 {
    let scale = b.iter().map(|v| v.abs()).fold(1.0, f64::max);
    max_abs_diff(a, b) / scale
}

#[test]
fn criterion_9_dense_oracles() {
    let mut worst = [0.0f64; 4];
    for fam in ElementFamily::ALL {
        let s = scheme(structured(3), fam);
        for (seed, p) in [
            (7, Params::new(5.0, 5.0)),
            (8, Params::new(3.0, 2.0).with_apvm(2e-2)),
        ] {
            let st = random_state(&s, seed);
            let [q, flux, du, dh] = dense_oracle(&s, &st, &p);
            let t = s.tendency(&st, &p).unwrap();
            let d = [
                rel_diff(s.diagnose_q(&st, &p).unwrap().coeffs(), &q),
                rel_diff(s.project_flux(&st).unwrap().coeffs(), &flux),
                rel_diff(&t.du, &du),
                rel_diff(&t.dh, &dh),
            ];
            for k in 0..4 {
                worst[k] = worst[k].max(d[k]);
            }
        }
    }
    let pass = worst.iter().all(|&v| v <= 1e-10);
    report(
        9,
        "dense brute-force oracles, n=3 (18 cells)",
        pass,
        &format!(
            "max rel diff q {:.1e}, F {:.1e}, u_t {:.1e}, h_t {:.1e} <= 1e-10",
            worst[0], worst[1], worst[2], worst[3]
        ),
    );
    assert!(pass);
}
