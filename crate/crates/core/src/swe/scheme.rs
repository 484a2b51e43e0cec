//! The spatial discretisation: cached operators and the nonlinear forms.
//!
//! With `u ∈ S`, `h ∈ V`, `q ∈ E` and `F ∈ S`:
//!
//! ```text
//! ⟨γ, q h⟩   = ⟨-∇⊥γ, u⟩ + ⟨γ, f⟩                       for all γ ∈ E
//! ⟨w, F⟩     = ⟨w, h u⟩                                  for all w ∈ S
//! ⟨w, u_t⟩   = -⟨w, q* F⊥⟩ + ⟨∇·w, g h + |u|²/2⟩         for all w ∈ S
//! h_t        = -∇·F
//! ```
//!
//! where `q* = q - τ (u·∇) q` (`τ = 0` without upwinding) and
//! `v⊥ = (-v_y, v_x)`. All integrals use one quadrature rule that is exact
//! for every integrand above.

use std::sync::Arc;

use super::operators::{assemble_div, assemble_perp_grad_embedding};
use super::params::Params;
use super::state::State;
use crate::error::{Error, Result};
use crate::fem::projection::wrap_point;
use crate::fem::tables::gather;
use crate::fem::{
    assemble_mass, make_triple, triangle_quadrature, CellTables, ElementFamily, Field,
    FunctionSpace, QuadratureRule, Triple,
};
use crate::linalg::{
    cg_solve_from, default_maxit, BlockDiagonalSolver, CellScatter, CgOptions, CsrMatrix,
    SolverReport,
};
use crate::mesh::Mesh;

/// Depths at or below this at any quadrature point abort the evaluation.
pub const MIN_DEPTH: f64 = 1e-10;

/// Time derivatives and the diagnostics computed on the way.
#[derive(Debug, Clone, PartialEq)]
pub struct Tendency {
    pub du: Vec<f64>,
    pub dh: Vec<f64>,
    pub q: Vec<f64>,
    pub flux: Vec<f64>,
    /// Largest CG iteration count among the solves of this evaluation.
    pub cg_iterations: usize,
}

/// Previous solutions reused as CG initial guesses.
#[derive(Debug, Clone, Default)]
pub struct WarmStart {
    q: Option<Vec<f64>>,
    flux: Option<Vec<f64>>,
    du: Option<Vec<f64>>,
}

impl WarmStart {
    pub fn clear(&mut self) {
        *self = Self::default();
    }
}

/// Velocity and depth sampled at every quadrature point.
struct Samples {
    u: Vec<[f64; 2]>,
    h: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct Scheme {
    triple: Triple,
    rule: QuadratureRule,
    te: CellTables,
    ts: CellTables,
    tv: CellTables,
    mass_s: CsrMatrix,
    mass_v: CsrMatrix,
    v_solver: BlockDiagonalSolver,
    div: CsrMatrix,
    perp_grad: CsrMatrix,
    e_pattern: CsrMatrix,
    e_scatter: CellScatter,
    cg: CgOptions,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl Scheme {
    pub fn new(mesh: Arc<Mesh>, family: ElementFamily) -> Result<Self> {
        Self::with_options(mesh, family, CgOptions::default())
    }

    pub fn with_options(mesh: Arc<Mesh>, family: ElementFamily, cg: CgOptions) -> Result<Self> {
        let triple = make_triple(mesh.clone(), family);
        let rule = triangle_quadrature(family.quadrature_degree())?;
        let te = CellTables::new(&triple.e, &rule);
        let ts = CellTables::new(&triple.s, &rule);
        let tv = CellTables::new(&triple.v, &rule);
        let mass_s = assemble_mass(&triple.s, None)?;
        let mass_v = assemble_mass(&triple.v, None)?;
        let v_solver = BlockDiagonalSolver::new(&mass_v, triple.v.local_dim())?;
        let div = assemble_div(&triple.s, &triple.v);
        let perp_grad = assemble_perp_grad_embedding(&triple.e, &triple.s);
        let e = triple.e.clone();
        let (mut e_pattern, e_scatter) = CellScatter::build(
            e.dim(),
            e.dim(),
            mesh.num_cells(),
            |c| e.dofs(c),
            |c| e.dofs(c),
        );
        e_pattern.set_symmetric(true);
        Ok(Self {
            triple,
            rule,
            te,
            ts,
            tv,
            mass_s,
            mass_v,
            v_solver,
            div,
            perp_grad,
            e_pattern,
            e_scatter,
            cg,
        })
    }

    pub fn family(&self) -> ElementFamily {
        self.triple.family
    }

    pub fn triple(&self) -> &Triple {
        &self.triple
    }

    pub fn mesh(&self) -> &Arc<Mesh> {
        self.triple.s.mesh()
    }

    pub fn e(&self) -> &Arc<FunctionSpace> {
        &self.triple.e
    }

    pub fn s(&self) -> &Arc<FunctionSpace> {
        &self.triple.s
    }

    pub fn v(&self) -> &Arc<FunctionSpace> {
        &self.triple.v
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    pub fn cg_options(&self) -> CgOptions {
        self.cg
    }

    pub fn mass_s(&self) -> &CsrMatrix {
        &self.mass_s
    }

    pub fn mass_v(&self) -> &CsrMatrix {
        &self.mass_v
    }

    /// `D`: S coefficients to V coefficients of the divergence.
    pub fn div(&self) -> &CsrMatrix {
        &self.div
    }

    /// `C`: E coefficients to S coefficients of `∇⊥`.
    pub fn perp_grad(&self) -> &CsrMatrix {
        &self.perp_grad
    }

    /// State from L² projections of analytic velocity and depth.
    pub fn project_state(
        &self,
        u: &dyn Fn([f64; 2]) -> [f64; 2],
        h: &dyn Fn([f64; 2]) -> f64,
        t: f64,
    ) -> Result<State> {
        use crate::fem::{l2_project_with, Source};
        let uf = l2_project_with(Source::Vector(u), self.s(), self.cg)?;
        let hf = l2_project_with(Source::Scalar(h), self.v(), self.cg)?;
        State::new(uf, hf, t)
    }

    pub fn state_from_coeffs(&self, u: Vec<f64>, h: Vec<f64>, t: f64) -> Result<State> {
        State::new(
            Field::new(self.s().clone(), u)?,
            Field::new(self.v().clone(), h)?,
            t,
        )
    }

    fn check_state(&self, state: &State) -> Result<()> {
        if *state.u.space().as_ref() != *self.s().as_ref()
            || *state.h.space().as_ref() != *self.v().as_ref()
        {
            return Err(Error::SpaceMismatch(
                "state does not belong to this scheme's spaces".into(),
            ));
        }
        Ok(())
    }

    fn maxit(&self, n: usize) -> usize {
        self.cg.maxit.unwrap_or_else(|| default_maxit(n))
    }

    fn cg(
        &self,
        a: &CsrMatrix,
        b: &[f64],
        guess: Option<&Vec<f64>>,
    ) -> Result<(Vec<f64>, SolverReport)> {
        let mut x = match guess {
            Some(g) if g.len() == b.len() => g.clone(),
            _ => vec![0.0; b.len()],
        };
        let rep = cg_solve_from(a, b, &mut x, self.cg.tol, self.maxit(b.len()))?;
        Ok((x, rep))
    }

    fn ncells(&self) -> usize {
        self.mesh().num_cells()
    }

    fn sample(&self, u: &[f64], h: &[f64], check_depth: bool) -> Result<Samples> {
        let nq = self.rule.len();
        let nc = self.ncells();
        let mut su = Vec::with_capacity(nc * nq);
        let mut sh = Vec::with_capacity(nc * nq);
        let mut ul = vec![0.0; self.ts.num_dofs()];
        let mut hl = vec![0.0; self.tv.num_dofs()];
        for c in 0..nc {
            gather(self.s(), c, u, &mut ul);
            gather(self.v(), c, h, &mut hl);
            for q in 0..nq {
                su.push(self.ts.eval_vector(c, q, &ul));
                let hv = self.tv.eval_scalar(c, q, &hl);
                if check_depth && !(hv > MIN_DEPTH) {
                    return Err(Error::NonPositiveDepth {
                        cell: c,
                        value: hv,
                        threshold: MIN_DEPTH,
                    });
                }
                sh.push(hv);
            }
        }
        Ok(Samples { u: su, h: sh })
    }

    /// Values of an E field, or of its gradient, at every quadrature point.
    fn e_values(&self, q: &[f64]) -> (Vec<f64>, Vec<[f64; 2]>) {
        let nq = self.rule.len();
        let mut vals = Vec::with_capacity(self.ncells() * nq);
        let mut grads = Vec::with_capacity(self.ncells() * nq);
        let mut ql = vec![0.0; self.te.num_dofs()];
        for c in 0..self.ncells() {
            gather(self.e(), c, q, &mut ql);
            for k in 0..nq {
                vals.push(self.te.eval_scalar(c, k, &ql));
                grads.push(self.te.eval_grad(c, k, &ql));
            }
        }
        (vals, grads)
    }

    fn s_values(&self, u: &[f64]) -> Vec<[f64; 2]> {
        let nq = self.rule.len();
        let mut out = Vec::with_capacity(self.ncells() * nq);
        let mut l = vec![0.0; self.ts.num_dofs()];
        for c in 0..self.ncells() {
            gather(self.s(), c, u, &mut l);
            for k in 0..nq {
                out.push(self.ts.eval_vector(c, k, &l));
            }
        }
        out
    }

    fn s_divs(&self, u: &[f64]) -> Vec<f64> {
        let nq = self.rule.len();
        let mut out = Vec::with_capacity(self.ncells() * nq);
        let mut l = vec![0.0; self.ts.num_dofs()];
        for c in 0..self.ncells() {
            gather(self.s(), c, u, &mut l);
            for k in 0..nq {
                out.push(self.ts.eval_div(c, k, &l));
            }
        }
        out
    }

    fn v_values(&self, h: &[f64]) -> Vec<f64> {
        let nq = self.rule.len();
        let mut out = Vec::with_capacity(self.ncells() * nq);
        let mut l = vec![0.0; self.tv.num_dofs()];
        for c in 0..self.ncells() {
            gather(self.v(), c, h, &mut l);
            for k in 0..nq {
                out.push(self.tv.eval_scalar(c, k, &l));
            }
        }
        out
    }

    /// Sum of `w · f(c, q)` over all quadrature points.
    fn integrate(&self, mut f: impl FnMut(usize, usize, usize) -> f64) -> f64 {
        let nq = self.rule.len();
        let mut total = 0.0;
        for c in 0..self.ncells() {
            for k in 0..nq {
                total += self.ts.weight(c, k) * f(c, k, c * nq + k);
            }
        }
        total
    }

    fn diagnose_q_raw(
        &self,
        samples: &Samples,
        params: &Params,
        guess: Option<&Vec<f64>>,
    ) -> Result<(Vec<f64>, SolverReport)> {
        let te = &self.te;
        let n = te.num_dofs();
        let nq = self.rule.len();
        let mut mat = self.e_pattern.clone();
        let mut b = vec![0.0; self.e().dim()];
        let mut local = vec![0.0; n * n];
        for c in 0..self.ncells() {
            local.iter_mut().for_each(|v| *v = 0.0);
            let dofs = self.e().dofs(c);
            for k in 0..nq {
                let idx = c * nq + k;
                let w = te.weight(c, k);
                let (u, h) = (samples.u[idx], samples.h[idx]);
                let f = params.coriolis.at(wrap_point(te.point(c, k)));
                let phi = te.scalar(c, k);
                let grad = te.grads(c, k);
                for i in 0..n {
                    let wi = w * h * phi[i];
                    for j in 0..n {
                        local[i * n + j] += wi * phi[j];
                    }
                    // -∇⊥φ·u = φ_y u_x - φ_x u_y
                    b[dofs[i]] += w * (phi[i] * f + grad[2 * i + 1] * u[0] - grad[2 * i] * u[1]);
                }
            }
            self.e_scatter.add(&mut mat, c, &local);
        }
        self.cg(&mat, &b, guess)
    }

    fn project_flux_raw(
        &self,
        samples: &Samples,
        guess: Option<&Vec<f64>>,
    ) -> Result<(Vec<f64>, SolverReport)> {
        let ts = &self.ts;
        let n = ts.num_dofs();
        let nq = self.rule.len();
        let mut b = vec![0.0; self.s().dim()];
        for c in 0..self.ncells() {
            let dofs = self.s().dofs(c);
            for k in 0..nq {
                let idx = c * nq + k;
                let w = ts.weight(c, k) * samples.h[idx];
                let u = samples.u[idx];
                let phi = ts.vectors(c, k);
                for i in 0..n {
                    b[dofs[i]] += w * (phi[2 * i] * u[0] + phi[2 * i + 1] * u[1]);
                }
            }
        }
        self.cg(&self.mass_s, &b, guess)
    }

    /// Potential vorticity `q ∈ E` of a state.
    pub fn diagnose_q(&self, state: &State, params: &Params) -> Result<Field> {
        self.check_state(state)?;
        let samples = self.sample(state.u.coeffs(), state.h.coeffs(), true)?;
        let (q, _) = self.diagnose_q_raw(&samples, params, None)?;
        Field::new(self.e().clone(), q)
    }

    /// Volume flux `F ∈ S`, the projection of `h u`.
    pub fn project_flux(&self, state: &State) -> Result<Field> {
        self.check_state(state)?;
        let samples = self.sample(state.u.coeffs(), state.h.coeffs(), false)?;
        let (f, _) = self.project_flux_raw(&samples, None)?;
        Field::new(self.s().clone(), f)
    }

    /// `q* = q - τ (u·∇) q` at every quadrature point, cell-major.
    pub fn apvm_q_star(&self, q: &Field, u: &Field, tau: f64) -> Vec<f64> {
        let (vals, grads) = self.e_values(q.coeffs());
        let us = self.s_values(u.coeffs());
        vals.iter()
            .zip(&grads)
            .zip(&us)
            .map(|((&qv, g), uv)| qv - tau * (uv[0] * g[0] + uv[1] * g[1]))
            .collect()
    }

    pub fn tendency(&self, state: &State, params: &Params) -> Result<Tendency> {
        self.check_state(state)?;
        self.tendency_raw(
            state.u.coeffs(),
            state.h.coeffs(),
            params,
            &mut WarmStart::default(),
        )
    }

    /// Tendency of raw coefficient vectors, reusing and updating CG guesses.
    pub fn tendency_raw(
        &self,
        u: &[f64],
        h: &[f64],
        params: &Params,
        warm: &mut WarmStart,
    ) -> Result<Tendency> {
        params.validate()?;
        let tau = params.effective_tau();
        let samples = self.sample(u, h, true)?;
        let (q, rq) = self.diagnose_q_raw(&samples, params, warm.q.as_ref())?;
        let (flux, rf) = self.project_flux_raw(&samples, warm.flux.as_ref())?;

        let (te, ts) = (&self.te, &self.ts);
        let n = ts.num_dofs();
        let nq = self.rule.len();
        let mut b = vec![0.0; self.s().dim()];
        let mut ql = vec![0.0; te.num_dofs()];
        let mut fl = vec![0.0; n];
        for c in 0..self.ncells() {
            gather(self.e(), c, &q, &mut ql);
            gather(self.s(), c, &flux, &mut fl);
            let dofs = self.s().dofs(c);
            for k in 0..nq {
                let idx = c * nq + k;
                let w = ts.weight(c, k);
                let (uv, hv) = (samples.u[idx], samples.h[idx]);
                let mut qs = te.eval_scalar(c, k, &ql);
                if tau != 0.0 {
                    let g = te.eval_grad(c, k, &ql);
                    qs -= tau * (uv[0] * g[0] + uv[1] * g[1]);
                }
                let fv = ts.eval_vector(c, k, &fl);
                let fperp = [-fv[1], fv[0]];
                let bern = params.g * hv + 0.5 * (uv[0] * uv[0] + uv[1] * uv[1]);
                let phi = ts.vectors(c, k);
                let div = ts.divs(c, k);
                for i in 0..n {
                    let flux_term = phi[2 * i] * fperp[0] + phi[2 * i + 1] * fperp[1];
                    b[dofs[i]] += w * (-qs * flux_term + div[i] * bern);
                }
            }
        }
        let (du, ru) = self.cg(&self.mass_s, &b, warm.du.as_ref())?;
        let dh: Vec<f64> = self.div.matvec(&flux).into_iter().map(|v| -v).collect();
        let cg_iterations = rq.iterations.max(rf.iterations).max(ru.iterations);
        warm.q = Some(q.clone());
        warm.flux = Some(flux.clone());
        warm.du = Some(du.clone());
        Ok(Tendency {
            du,
            dh,
            q,
            flux,
            cg_iterations,
        })
    }

    /// `½⟨h u, u⟩ + ½⟨g h, h⟩`
    pub fn energy(&self, state: &State, params: &Params) -> f64 {
        self.energy_raw(state.u.coeffs(), state.h.coeffs(), params.g)
    }

    pub fn energy_raw(&self, u: &[f64], h: &[f64], g: f64) -> f64 {
        let us = self.s_values(u);
        let hs = self.v_values(h);
        self.integrate(|_, _, i| {
            let uu = us[i][0] * us[i][0] + us[i][1] * us[i][1];
            0.5 * hs[i] * uu + 0.5 * g * hs[i] * hs[i]
        })
    }

    /// `⟨q², h⟩`
    pub fn enstrophy(&self, state: &State, q: &Field) -> f64 {
        let (qs, _) = self.e_values(q.coeffs());
        let hs = self.v_values(state.h.coeffs());
        self.integrate(|_, _, i| qs[i] * qs[i] * hs[i])
    }

    /// `⟨1, q h⟩`
    pub fn total_vorticity(&self, state: &State, q: &Field) -> f64 {
        let (qs, _) = self.e_values(q.coeffs());
        let hs = self.v_values(state.h.coeffs());
        self.integrate(|_, _, i| qs[i] * hs[i])
    }

    /// `⟨1, h⟩`
    pub fn total_mass(&self, state: &State) -> f64 {
        self.total_mass_raw(state.h.coeffs())
    }

    pub fn total_mass_raw(&self, h: &[f64]) -> f64 {
        let hs = self.v_values(h);
        self.integrate(|_, _, i| hs[i])
    }

    /// `⟨1, f⟩`
    pub fn total_coriolis(&self, params: &Params) -> f64 {
        self.integrate(|c, k, _| params.coriolis.at(wrap_point(self.ts.point(c, k))))
    }

    /// S-norm of the weak residual `r`: `⟨w, r⟩ = ⟨w, f u⊥⟩ - ⟨∇·w, g h⟩`.
    pub fn geostrophic_imbalance(&self, state: &State, params: &Params) -> Result<f64> {
        self.check_state(state)?;
        self.geostrophic_imbalance_raw(state.u.coeffs(), state.h.coeffs(), params)
            .map(|(v, _)| v)
    }

    pub fn geostrophic_imbalance_raw(
        &self,
        u: &[f64],
        h: &[f64],
        params: &Params,
    ) -> Result<(f64, SolverReport)> {
        let samples = self.sample(u, h, false)?;
        let ts = &self.ts;
        let n = ts.num_dofs();
        let nq = self.rule.len();
        let mut b = vec![0.0; self.s().dim()];
        for c in 0..self.ncells() {
            let dofs = self.s().dofs(c);
            for k in 0..nq {
                let idx = c * nq + k;
                let w = ts.weight(c, k);
                let f = params.coriolis.at(wrap_point(ts.point(c, k)));
                let uv = samples.u[idx];
                let fu = [-f * uv[1], f * uv[0]];
                let gh = params.g * samples.h[idx];
                let phi = ts.vectors(c, k);
                let div = ts.divs(c, k);
                for i in 0..n {
                    b[dofs[i]] += w * (phi[2 * i] * fu[0] + phi[2 * i + 1] * fu[1] - div[i] * gh);
                }
            }
        }
        let (r, rep) = self.cg(&self.mass_s, &b, None)?;
        Ok((dot(&r, &self.mass_s.matvec(&r)).max(0.0).sqrt(), rep))
    }

    /// `⟨F, u_t⟩ + ⟨h_t, g h + |u|²/2⟩`, using the assembled `M_S u_t`.
    pub fn energy_rate(&self, state: &State, params: &Params, tend: &Tendency) -> f64 {
        let msdu = self.mass_s.matvec(&tend.du);
        let kinetic = dot(&tend.flux, &msdu);
        let us = self.s_values(state.u.coeffs());
        let hs = self.v_values(state.h.coeffs());
        let dhs = self.v_values(&tend.dh);
        let potential = self.integrate(|_, _, i| {
            dhs[i] * (params.g * hs[i] + 0.5 * (us[i][0] * us[i][0] + us[i][1] * us[i][1]))
        });
        kinetic + potential
    }

    /// `2⟨q, ∂t(q h)⟩ - ⟨q², h_t⟩` with `⟨q, ∂t(q h)⟩ = -⟨∇⊥q, u_t⟩`.
    pub fn enstrophy_rate(&self, tend: &Tendency) -> f64 {
        let cq = self.perp_grad.matvec(&tend.q);
        let msdu = self.mass_s.matvec(&tend.du);
        let (qs, _) = self.e_values(&tend.q);
        let dhs = self.v_values(&tend.dh);
        -2.0 * dot(&cq, &msdu) - self.integrate(|_, _, i| qs[i] * qs[i] * dhs[i])
    }

    /// `⟨γ_i, h q_t⟩` for every E basis function, from the PV definition
    /// differentiated in time: `-⟨∇⊥γ_i, u_t⟩ - ⟨γ_i q, h_t⟩`.
    pub fn pv_rate_weighted(&self, tend: &Tendency) -> Vec<f64> {
        let msdu = self.mass_s.matvec(&tend.du);
        let mut out: Vec<f64> = self
            .perp_grad
            .transpose_matvec(&msdu)
            .into_iter()
            .map(|v| -v)
            .collect();
        let (qs, _) = self.e_values(&tend.q);
        let dhs = self.v_values(&tend.dh);
        let nq = self.rule.len();
        let n = self.te.num_dofs();
        for c in 0..self.ncells() {
            let dofs = self.e().dofs(c);
            for k in 0..nq {
                let idx = c * nq + k;
                let w = self.te.weight(c, k) * qs[idx] * dhs[idx];
                let phi = self.te.scalar(c, k);
                for i in 0..n {
                    out[dofs[i]] -= w * phi[i];
                }
            }
        }
        out
    }

    /// `⟨a, -q b⊥⟩ + ⟨∇·a, β⟩ - ⟨α, ∇·b⟩` for `(a, α) = (δF/δu, δF/δh)` and
    /// `(b, β) = (δG/δu, δG/δh)`.
    pub fn bracket(
        &self,
        dfdu: &Field,
        dfdh: &Field,
        dgdu: &Field,
        dgdh: &Field,
        q: &Field,
    ) -> f64 {
        let a = self.s_values(dfdu.coeffs());
        let b = self.s_values(dgdu.coeffs());
        let da = self.s_divs(dfdu.coeffs());
        let db = self.s_divs(dgdu.coeffs());
        let alpha = self.v_values(dfdh.coeffs());
        let beta = self.v_values(dgdh.coeffs());
        let (qs, _) = self.e_values(q.coeffs());
        self.integrate(|_, _, i| {
            let bperp = [-b[i][1], b[i][0]];
            -qs[i] * (a[i][0] * bperp[0] + a[i][1] * bperp[1]) + da[i] * beta[i] - alpha[i] * db[i]
        })
    }

    /// Variational derivatives of the enstrophy `⟨q², h⟩`:
    /// `δ/δu = -2 ∇⊥q` and `δ/δh = -Π_V(q²)`.
    pub fn enstrophy_variations(&self, q: &Field) -> Result<(Field, Field)> {
        let dcdu: Vec<f64> = self
            .perp_grad
            .matvec(q.coeffs())
            .into_iter()
            .map(|v| -2.0 * v)
            .collect();
        let (qs, _) = self.e_values(q.coeffs());
        let nq = self.rule.len();
        let n = self.tv.num_dofs();
        let mut b = vec![0.0; self.v().dim()];
        for c in 0..self.ncells() {
            let dofs = self.v().dofs(c);
            for k in 0..nq {
                let idx = c * nq + k;
                let w = self.tv.weight(c, k) * qs[idx] * qs[idx];
                let phi = self.tv.scalar(c, k);
                for i in 0..n {
                    b[dofs[i]] -= w * phi[i];
                }
            }
        }
        let dcdh = self.v_solver.solve(&b)?;
        Ok((
            Field::new(self.s().clone(), dcdu)?,
            Field::new(self.v().clone(), dcdh)?,
        ))
    }

    /// Weak curl `S → E`: `⟨γ, wcurl u⟩ = ⟨-∇⊥γ, u⟩`.
    pub fn weak_curl(&self, u: &Field) -> Result<Field> {
        let msu = self.mass_s.matvec(u.coeffs());
        let b: Vec<f64> = self
            .perp_grad
            .transpose_matvec(&msu)
            .into_iter()
            .map(|v| -v)
            .collect();
        let me = assemble_mass(self.e(), None)?;
        let (x, _) = self.cg(&me, &b, None)?;
        Field::new(self.e().clone(), x)
    }

    /// Solve a V mass system exactly (block diagonal).
    pub fn solve_v_mass(&self, b: &[f64]) -> Result<Vec<f64>> {
        self.v_solver.solve(b)
    }

    /// Solve an S mass system with CG.
    pub fn solve_s_mass(&self, b: &[f64]) -> Result<(Vec<f64>, SolverReport)> {
        self.cg(&self.mass_s, b, None)
    }
}
