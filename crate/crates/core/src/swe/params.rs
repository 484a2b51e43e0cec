use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Coriolis parameter, evaluated at quadrature points.
#[derive(Clone)]
pub enum Coriolis {
    Constant(f64),
    Function(Arc<dyn Fn([f64; 2]) -> f64 + Send + Sync>),
}

impl Coriolis {
    #[inline]
    pub fn at(&self, x: [f64; 2]) -> f64 {
        match self {
            Self::Constant(f) => *f,
            Self::Function(f) => f(x),
        }
    }
}

impl fmt::Debug for Coriolis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(v) => write!(f, "Constant({v})"),
            Self::Function(_) => f.write_str("Function(..)"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Params {
    pub coriolis: Coriolis,
    pub g: f64,
    pub apvm: bool,
    /// Upwinding timescale of the anticipated PV flux.
    pub tau: f64,
}

impl Params {
    pub fn new(f: f64, g: f64) -> Self {
        Self {
            coriolis: Coriolis::Constant(f),
            g,
            apvm: false,
            tau: 0.0,
        }
    }

    pub fn with_apvm(mut self, tau: f64) -> Self {
        self.apvm = true;
        self.tau = tau;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.g > 0.0 && self.g.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "g must be positive, got {}",
                self.g
            )));
        }
        if !(self.tau >= 0.0 && self.tau.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "tau must be non-negative, got {}",
                self.tau
            )));
        }
        Ok(())
    }

    /// Effective upwinding timescale (zero when disabled).
    pub fn effective_tau(&self) -> f64 {
        if self.apvm {
            self.tau
        } else {
            0.0
        }
    }
}
