//! Classical fourth-order Runge-Kutta integration and the sampled run loop.

use crate::error::{Error, Result};
use crate::swe::{Params, Scheme, State, WarmStart};

/// Runs abort once `|E|` exceeds this multiple of the initial energy.
pub const BLOWUP_FACTOR: f64 = 1e3;

/// Default anticipated-PV timescale for a step size.
pub fn default_tau(dt: f64) -> f64 {
    0.5 * dt
}

/// Diagnostics at one sampled step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub step: usize,
    pub time: f64,
    pub energy: f64,
    pub enstrophy: f64,
    pub vorticity: f64,
    pub mass: f64,
    pub imbalance: f64,
    /// Largest CG iteration count since the previous sample.
    pub cg_iters_max: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunRecord {
    pub samples: Vec<Sample>,
}

impl RunRecord {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn first(&self) -> Option<&Sample> {
        self.samples.first()
    }

    pub fn last(&self) -> Option<&Sample> {
        self.samples.last()
    }

    pub fn column(&self, f: impl Fn(&Sample) -> f64) -> Vec<f64> {
        self.samples.iter().map(f).collect()
    }
}

/// RK4 stepper that carries CG initial guesses between stages.
pub struct Integrator<'a> {
    scheme: &'a Scheme,
    params: &'a Params,
    warm: WarmStart,
}

impl<'a> Integrator<'a> {
    pub fn new(scheme: &'a Scheme, params: &'a Params) -> Self {
        Self {
            scheme,
            params,
            warm: WarmStart::default(),
        }
    }

    /// One step; returns the new state and the largest CG iteration count.
    pub fn step(&mut self, state: &State, dt: f64) -> Result<(State, usize)> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "dt must be positive, got {dt}"
            )));
        }
        let (u0, h0) = (state.u.coeffs(), state.h.coeffs());
        let mut iters = 0;
        let mut eval = |u: &[f64], h: &[f64]| -> Result<(Vec<f64>, Vec<f64>)> {
            let t = self
                .scheme
                .tendency_raw(u, h, self.params, &mut self.warm)?;
            iters = iters.max(t.cg_iterations);
            Ok((t.du, t.dh))
        };
        let axpy = |x: &[f64], a: f64, k: &[f64]| -> Vec<f64> {
            x.iter().zip(k).map(|(xi, ki)| xi + a * ki).collect()
        };
        let (k1u, k1h) = eval(u0, h0)?;
        let (k2u, k2h) = eval(&axpy(u0, 0.5 * dt, &k1u), &axpy(h0, 0.5 * dt, &k1h))?;
        let (k3u, k3h) = eval(&axpy(u0, 0.5 * dt, &k2u), &axpy(h0, 0.5 * dt, &k2h))?;
        let (k4u, k4h) = eval(&axpy(u0, dt, &k3u), &axpy(h0, dt, &k3h))?;
        let combine = |x: &[f64], a: &[f64], b: &[f64], c: &[f64], d: &[f64]| -> Vec<f64> {
            (0..x.len())
                .map(|i| x[i] + dt / 6.0 * (a[i] + 2.0 * b[i] + 2.0 * c[i] + d[i]))
                .collect()
        };
        let u = combine(u0, &k1u, &k2u, &k3u, &k4u);
        let h = combine(h0, &k1h, &k2h, &k3h, &k4h);
        Ok((state.with_coeffs(u, h, state.t + dt)?, iters))
    }
}

/// A single RK4 step without warm starts.
pub fn rk4_step(scheme: &Scheme, state: &State, params: &Params, dt: f64) -> Result<State> {
    Integrator::new(scheme, params)
        .step(state, dt)
        .map(|(s, _)| s)
}

/// Diagnostics of a state; `cg_iters_max` is left at zero.
pub fn sample(scheme: &Scheme, state: &State, params: &Params, step: usize) -> Result<Sample> {
    let q = scheme.diagnose_q(state, params)?;
    Ok(Sample {
        step,
        time: state.t,
        energy: scheme.energy(state, params),
        enstrophy: scheme.enstrophy(state, &q),
        vorticity: scheme.total_vorticity(state, &q),
        mass: scheme.total_mass(state),
        imbalance: scheme.geostrophic_imbalance(state, params)?,
        cg_iters_max: 0,
    })
}

/// Step sizes covering `[t0, t_end]`: full steps then one shorter final step.
pub fn step_count(t0: f64, t_end: f64, dt: f64) -> usize {
    let span = t_end - t0;
    if span <= 0.0 {
        return 0;
    }
    let n = (span / dt).round();
    if (n * dt - span).abs() <= 1e-9 * span {
        n as usize
    } else {
        (span / dt).ceil() as usize
    }
}

/// Integrate to `t_end`, sampling every `sample_every` steps plus the first
/// and last states.
pub fn run(
    scheme: &Scheme,
    initial: &State,
    params: &Params,
    dt: f64,
    t_end: f64,
    sample_every: usize,
) -> Result<(State, RunRecord)> {
    run_observed(scheme, initial, params, dt, t_end, sample_every, |_, _| {
        Ok(())
    })
}

/// As [`run`], calling `observe(step, state)` after every completed step.
pub fn run_observed(
    scheme: &Scheme,
    initial: &State,
    params: &Params,
    dt: f64,
    t_end: f64,
    sample_every: usize,
    mut observe: impl FnMut(usize, &State) -> Result<()>,
) -> Result<(State, RunRecord)> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "dt must be positive, got {dt}"
        )));
    }
    if !(t_end >= initial.t && t_end.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "t_end = {t_end} precedes the initial time {}",
            initial.t
        )));
    }
    if sample_every == 0 {
        return Err(Error::InvalidArgument("sample_every must be >= 1".into()));
    }
    params.validate()?;
    let t0 = initial.t;
    let nsteps = step_count(t0, t_end, dt);
    let mut record = RunRecord::default();
    record.samples.push(sample(scheme, initial, params, 0)?);
    let e0 = record.samples[0].energy;
    let mut integrator = Integrator::new(scheme, params);
    let mut state = initial.clone();
    let mut iters = 0;
    for step in 1..=nsteps {
        let target = if step == nsteps {
            t_end
        } else {
            t0 + step as f64 * dt
        };
        let h = target - state.t;
        let wrap = |e: Error| Error::StepFailed {
            step,
            source: Box::new(e),
        };
        let (mut next, it) = integrator.step(&state, h).map_err(wrap)?;
        next.t = target;
        iters = iters.max(it);
        let energy = scheme.energy(&next, params);
        if !energy.is_finite() || energy.abs() > BLOWUP_FACTOR * e0.abs() {
            return Err(Error::BlowUp {
                step,
                energy,
                initial: e0,
                factor: BLOWUP_FACTOR,
            });
        }
        state = next;
        observe(step, &state)?;
        if step % sample_every == 0 || step == nsteps {
            let mut s = sample(scheme, &state, params, step).map_err(wrap)?;
            s.cg_iters_max = iters;
            iters = 0;
            record.samples.push(s);
        }
    }
    Ok((state, record))
}
