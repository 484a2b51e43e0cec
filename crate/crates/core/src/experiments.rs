//! Standard test cases: a steady geostrophic jet, a conservation order study
//! and a pair of merging vortices.

use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fem::{ElementFamily, Field};
use crate::linalg::CgOptions;
use crate::mesh::{read_msh, structured_mesh, Mesh};
use crate::swe::{Params, Scheme, State};
use crate::timeint::{default_tau, run, run_observed, RunRecord};

/// Least-squares slope of `ln y` against `ln x`. NaN with fewer than two
/// points or any non-positive entry.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    if x.len() != y.len() || x.len() < 2 || x.iter().chain(y).any(|&v| !(v > 0.0)) {
        return f64::NAN;
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Where a mesh comes from: `n=<int>` or `msh=<path>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MeshSpec {
    Structured(usize),
    Msh(PathBuf),
}

impl MeshSpec {
    pub fn build(&self) -> Result<Arc<Mesh>> {
        match self {
            Self::Structured(n) => structured_mesh(*n).map(Arc::new),
            Self::Msh(p) => read_msh(p).map(Arc::new),
        }
    }
}

impl fmt::Display for MeshSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Structured(n) => write!(f, "n={n}"),
            Self::Msh(p) => write!(f, "msh={}", p.display()),
        }
    }
}

impl FromStr for MeshSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(n) = s.strip_prefix("n=") {
            n.trim()
                .parse()
                .map(Self::Structured)
                .map_err(|_| Error::InvalidArgument(format!("bad mesh size {n:?}")))
        } else if let Some(p) = s.strip_prefix("msh=") {
            Ok(Self::Msh(PathBuf::from(p.trim())))
        } else {
            Err(Error::InvalidArgument(format!(
                "mesh spec {s:?} must be n=<int> or msh=<path>"
            )))
        }
    }
}

/// Grid spacing of a mesh: `1/n` for the structured `n × n` mesh.
pub fn mesh_spacing(mesh: &Mesh) -> f64 {
    (2.0 * mesh.total_area() / mesh.num_cells() as f64).sqrt()
}

/// Sum of `exp(-r²/2σ²)` over a Gaussian and its 8 nearest periodic images,
/// returned with its gradient.
fn periodic_gaussian(p: [f64; 2], c: [f64; 2], sigma: f64) -> (f64, [f64; 2]) {
    let s2 = sigma * sigma;
    let (mut v, mut g) = (0.0, [0.0, 0.0]);
    for ix in -1..=1 {
        for iy in -1..=1 {
            let dx = p[0] - c[0] - ix as f64;
            let dy = p[1] - c[1] - iy as f64;
            let e = (-(dx * dx + dy * dy) / (2.0 * s2)).exp();
            v += e;
            g[0] -= dx / s2 * e;
            g[1] -= dy / s2 * e;
        }
    }
    (v, g)
}

/// Initial conditions of the standard test cases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialCondition {
    /// `u = (sin 4πy, 0)`, `h = 10 + (f/g) cos(4πy) / 4π`.
    Balance,
    /// `u = (0, sin 2πx)`, `h = 1 + (f/g) sin(4πy) / 4π`.
    Conservation,
    /// Two Gaussian vortices in linear geostrophic balance.
    Vortex(VortexShape),
    /// `u = 0`, `h = 1`.
    Rest,
}

/// Streamfunction `ψ = A [G(x - c1) + G(x - c2)]` and `h = h0 + (f/g) ψ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VortexShape {
    pub centres: [[f64; 2]; 2],
    pub sigma: f64,
    pub max_speed: f64,
    pub h0: f64,
}

impl Default for VortexShape {
    fn default() -> Self {
        Self {
            centres: [[0.4, 0.5], [0.6, 0.5]],
            sigma: 0.07,
            max_speed: 0.05,
            h0: 1.0,
        }
    }
}

impl VortexShape {
    fn unit_psi(&self, p: [f64; 2]) -> (f64, [f64; 2]) {
        let (a, ga) = periodic_gaussian(p, self.centres[0], self.sigma);
        let (b, gb) = periodic_gaussian(p, self.centres[1], self.sigma);
        (a + b, [ga[0] + gb[0], ga[1] + gb[1]])
    }

    /// Amplitude `A` giving the requested peak speed, found by sampling the
    /// unit-amplitude speed on a 1000 × 1000 grid.
    pub fn amplitude(&self) -> f64 {
        let n = 1000;
        let mut peak: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let p = [(i as f64 + 0.5) / n as f64, (j as f64 + 0.5) / n as f64];
                let (_, g) = self.unit_psi(p);
                peak = peak.max(g[0].hypot(g[1]));
            }
        }
        self.max_speed / peak
    }

    /// `(ψ, ∇ψ)` at a point with amplitude `a`.
    pub fn psi(&self, a: f64, p: [f64; 2]) -> (f64, [f64; 2]) {
        let (v, g) = self.unit_psi(p);
        (a * v, [a * g[0], a * g[1]])
    }
}

impl InitialCondition {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Balance => "balance",
            Self::Conservation => "conservation",
            Self::Vortex(_) => "vortex",
            Self::Rest => "rest",
        }
    }

    /// L² projections of the velocity and depth onto the scheme's spaces.
    pub fn project(&self, scheme: &Scheme, f: f64, g: f64) -> Result<State> {
        let k = 1.0 / (4.0 * PI) * f / g;
        match *self {
            Self::Balance => scheme.project_state(
                &|p| [(4.0 * PI * p[1]).sin(), 0.0],
                &|p| 10.0 + k * (4.0 * PI * p[1]).cos(),
                0.0,
            ),
            Self::Conservation => scheme.project_state(
                &|p| [0.0, (2.0 * PI * p[0]).sin()],
                &|p| 1.0 + k * (4.0 * PI * p[1]).sin(),
                0.0,
            ),
            Self::Vortex(shape) => {
                let a = shape.amplitude();
                scheme.project_state(
                    &|p| {
                        let (_, d) = shape.psi(a, p);
                        [-d[1], d[0]]
                    },
                    &|p| shape.h0 + f / g * shape.psi(a, p).0,
                    0.0,
                )
            }
            Self::Rest => scheme.project_state(&|_| [0.0, 0.0], &|_| 1.0, 0.0),
        }
    }
}

impl FromStr for InitialCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "balance" => Ok(Self::Balance),
            "conservation" => Ok(Self::Conservation),
            "vortex" => Ok(Self::Vortex(VortexShape::default())),
            "rest" => Ok(Self::Rest),
            other => Err(Error::InvalidArgument(format!(
                "unknown initial condition {other:?} (expected balance, conservation, vortex or rest)"
            ))),
        }
    }
}

/// Model parameters shared by the experiment drivers.
#[derive(Debug, Clone, PartialEq)]
pub struct Physics {
    pub f: f64,
    pub g: f64,
    pub apvm: bool,
    /// Upwinding timescale; `dt/2` when absent.
    pub tau: Option<f64>,
}

impl Physics {
    pub fn params(&self, dt: f64) -> Params {
        let p = Params::new(self.f, self.g);
        if self.apvm {
            p.with_apvm(self.tau.unwrap_or_else(|| default_tau(dt)))
        } else {
            p
        }
    }
}

fn l2_norm(m: &crate::linalg::CsrMatrix, a: &Field, b: &Field) -> f64 {
    let d: Vec<f64> = a
        .coeffs()
        .iter()
        .zip(b.coeffs())
        .map(|(x, y)| x - y)
        .collect();
    let md = m.matvec(&d);
    d.iter()
        .zip(&md)
        .map(|(x, y)| x * y)
        .sum::<f64>()
        .max(0.0)
        .sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BalanceSetup {
    pub family: ElementFamily,
    pub meshes: Vec<MeshSpec>,
    pub physics: Physics,
    pub dt: f64,
    pub t_end: f64,
}

impl BalanceSetup {
    pub fn new(family: ElementFamily) -> Self {
        Self {
            family,
            meshes: [8, 16, 32].map(MeshSpec::Structured).to_vec(),
            physics: Physics {
                f: 10.0,
                g: 10.0,
                apvm: false,
                tau: None,
            },
            dt: 5e-4,
            t_end: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BalanceRow {
    pub mesh: String,
    pub cells: usize,
    pub dofs: usize,
    pub dx: f64,
    pub err_u: f64,
    pub err_h: f64,
    pub record: RunRecord,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BalanceTable {
    pub rows: Vec<BalanceRow>,
    /// Slopes of the errors against `Δx`.
    pub slope_u_dx: f64,
    pub slope_h_dx: f64,
    /// Slopes of the errors against `1/√n_dof`.
    pub slope_u_dof: f64,
    pub slope_h_dof: f64,
}

/// Run the geostrophic jet on each mesh and measure the drift from the
/// projected initial state.
pub fn balance(setup: &BalanceSetup) -> Result<BalanceTable> {
    let mut rows = Vec::new();
    for spec in &setup.meshes {
        let mesh = spec.build()?;
        let scheme = Scheme::new(mesh.clone(), setup.family)?;
        let params = setup.physics.params(setup.dt);
        let init = InitialCondition::Balance.project(&scheme, setup.physics.f, setup.physics.g)?;
        let steps = crate::timeint::step_count(init.t, setup.t_end, setup.dt).max(1);
        let (fin, record) = run(&scheme, &init, &params, setup.dt, setup.t_end, steps)?;
        rows.push(BalanceRow {
            mesh: spec.to_string(),
            cells: mesh.num_cells(),
            dofs: scheme.s().dim() + scheme.v().dim(),
            dx: mesh_spacing(&mesh),
            err_u: l2_norm(scheme.mass_s(), &fin.u, &init.u),
            err_h: l2_norm(scheme.mass_v(), &fin.h, &init.h),
            record,
        });
    }
    let dx: Vec<f64> = rows.iter().map(|r| r.dx).collect();
    let inv_dof: Vec<f64> = rows.iter().map(|r| 1.0 / (r.dofs as f64).sqrt()).collect();
    let eu: Vec<f64> = rows.iter().map(|r| r.err_u).collect();
    let eh: Vec<f64> = rows.iter().map(|r| r.err_h).collect();
    Ok(BalanceTable {
        slope_u_dx: loglog_slope(&dx, &eu),
        slope_h_dx: loglog_slope(&dx, &eh),
        slope_u_dof: loglog_slope(&inv_dof, &eu),
        slope_h_dof: loglog_slope(&inv_dof, &eh),
        rows,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConservationSetup {
    pub family: ElementFamily,
    pub mesh: MeshSpec,
    pub physics: Physics,
    pub dts: Vec<f64>,
    pub t_end: f64,
    pub cg: CgOptions,
}

/// Relative CG tolerance of the conservation study. The smallest step sizes
/// produce enstrophy changes near `1e-14`, below the noise of the default.
pub const CONSERVATION_CG_TOL: f64 = 1e-13;

impl ConservationSetup {
    pub fn new(family: ElementFamily) -> Self {
        Self {
            family,
            mesh: MeshSpec::Structured(16),
            physics: Physics {
                f: 5.0,
                g: 5.0,
                apvm: false,
                tau: None,
            },
            dts: vec![2e-3, 1e-3, 5e-4, 2.5e-4],
            t_end: 1.001,
            cg: CgOptions {
                tol: CONSERVATION_CG_TOL,
                maxit: None,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConservationRow {
    pub dt: f64,
    pub steps: usize,
    /// `(E_end - E_0) / E_0`
    pub energy_change: f64,
    /// `(Z_end - Z_0) / Z_0`
    pub enstrophy_change: f64,
    pub record: RunRecord,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConservationTable {
    pub rows: Vec<ConservationRow>,
    /// Slopes of the absolute relative changes against `Δt`.
    pub slope_energy: f64,
    pub slope_enstrophy: f64,
}

/// Relative energy and enstrophy change after `t_end` for each step size.
pub fn conservation(setup: &ConservationSetup) -> Result<ConservationTable> {
    let mesh = setup.mesh.build()?;
    let scheme = Scheme::with_options(mesh, setup.family, setup.cg)?;
    let mut rows = Vec::new();
    for &dt in &setup.dts {
        let params = setup.physics.params(dt);
        let init =
            InitialCondition::Conservation.project(&scheme, setup.physics.f, setup.physics.g)?;
        let steps = crate::timeint::step_count(init.t, setup.t_end, dt);
        let (_, record) = run(&scheme, &init, &params, dt, setup.t_end, steps.max(1))?;
        let (a, b) = (record.first().unwrap(), record.last().unwrap());
        rows.push(ConservationRow {
            dt,
            steps,
            energy_change: (b.energy - a.energy) / a.energy,
            enstrophy_change: (b.enstrophy - a.enstrophy) / a.enstrophy,
            record,
        });
    }
    let dts: Vec<f64> = rows.iter().map(|r| r.dt).collect();
    let de: Vec<f64> = rows.iter().map(|r| r.energy_change.abs()).collect();
    let dz: Vec<f64> = rows.iter().map(|r| r.enstrophy_change.abs()).collect();
    Ok(ConservationTable {
        slope_energy: loglog_slope(&dts, &de),
        slope_enstrophy: loglog_slope(&dts, &dz),
        rows,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct VortexSetup {
    pub family: ElementFamily,
    pub mesh: MeshSpec,
    pub physics: Physics,
    pub shape: VortexShape,
    pub dt: f64,
    pub t_end: f64,
    pub sample_every: usize,
    /// Times at which the PV field is kept.
    pub snapshot_times: Vec<f64>,
}

impl VortexSetup {
    pub fn new(mesh: MeshSpec) -> Self {
        Self {
            family: ElementFamily::Bdm1,
            mesh,
            physics: Physics {
                f: 5.0,
                g: 5.0,
                apvm: false,
                tau: None,
            },
            shape: VortexShape::default(),
            dt: 5e-3,
            t_end: 8.0,
            sample_every: 20,
            snapshot_times: vec![0.0, 8.0, 16.0, 24.0, 32.0, 40.0, 48.0, 56.0],
        }
    }
}

#[derive(Debug, Clone)]
pub struct Snapshot {
    pub time: f64,
    pub state: State,
    pub q: Field,
}

#[derive(Debug, Clone)]
pub struct VortexOutcome {
    pub record: RunRecord,
    pub snapshots: Vec<Snapshot>,
    pub final_state: State,
}

/// Merging-vortex run with PV snapshots at the requested times.
pub fn vortex(setup: &VortexSetup) -> Result<VortexOutcome> {
    let mesh = setup.mesh.build()?;
    let scheme = Scheme::new(mesh, setup.family)?;
    let params = setup.physics.params(setup.dt);
    let init =
        InitialCondition::Vortex(setup.shape).project(&scheme, setup.physics.f, setup.physics.g)?;
    let mut snapshots = Vec::new();
    let mut take = |state: &State| -> Result<()> {
        let q = scheme.diagnose_q(state, &params)?;
        snapshots.push(Snapshot {
            time: state.t,
            state: state.clone(),
            q,
        });
        Ok(())
    };
    let near = |t: f64, s: f64| (t - s).abs() <= 0.5 * setup.dt;
    if setup.snapshot_times.iter().any(|&s| near(init.t, s)) {
        take(&init)?;
    }
    let (final_state, record) = run_observed(
        &scheme,
        &init,
        &params,
        setup.dt,
        setup.t_end,
        setup.sample_every,
        |_, st| {
            if setup.snapshot_times.iter().any(|&s| near(st.t, s)) {
                take(st)?;
            }
            Ok(())
        },
    )?;
    Ok(VortexOutcome {
        record,
        snapshots,
        final_state,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let x = [1.0, 0.5, 0.25, 0.125];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(2.5)).collect();
        assert!((loglog_slope(&x, &y) - 2.5).abs() < 1e-12);
        assert!(loglog_slope(&x[..1], &y[..1]).is_nan());
        assert!(loglog_slope(&[1.0, 2.0], &[0.0, 1.0]).is_nan());
    }

    #[test]
    fn mesh_spec_round_trip() {
        for s in ["n=8", "msh=meshes/periodic_16.msh"] {
            assert_eq!(s.parse::<MeshSpec>().unwrap().to_string(), s);
        }
        assert!("8".parse::<MeshSpec>().is_err());
        assert!("n=x".parse::<MeshSpec>().is_err());
    }

    #[test]
    fn structured_spacing() {
        let m = structured_mesh(8).unwrap();
        assert!((mesh_spacing(&m) - 0.125).abs() < 1e-14);
    }

    #[test]
    fn vortex_peak_speed() {
        let shape = VortexShape::default();
        let a = shape.amplitude();
        let mut peak: f64 = 0.0;
        for i in 0..300 {
            for j in 0..300 {
                let (_, g) = shape.psi(a, [i as f64 / 300.0, j as f64 / 300.0]);
                peak = peak.max(g[0].hypot(g[1]));
            }
        }
        assert!((peak - 0.05).abs() < 1e-3, "{peak}");
    }

    #[test]
    fn periodic_gaussian_gradient() {
        let (c, s) = ([0.1, 0.95], 0.07);
        let p = [0.97, 0.03];
        let (_, g) = periodic_gaussian(p, c, s);
        let eps = 1e-6;
        let fd = |d: [f64; 2]| {
            (periodic_gaussian([p[0] + d[0], p[1] + d[1]], c, s).0
                - periodic_gaussian([p[0] - d[0], p[1] - d[1]], c, s).0)
                / (2.0 * eps)
        };
        assert!((g[0] - fd([eps, 0.0])).abs() < 1e-6);
        assert!((g[1] - fd([0.0, eps])).abs() < 1e-6);
    }
}
