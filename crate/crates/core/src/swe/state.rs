use crate::error::{Error, Result};
use crate::fem::Field;

/// Velocity in S, layer depth in V, and the current time.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub u: Field,
    pub h: Field,
    pub t: f64,
}

impl State {
    pub fn new(u: Field, h: Field, t: f64) -> Result<Self> {
        if !u.space().is_vector() || h.space().is_vector() {
            return Err(Error::SpaceMismatch(
                "state needs a vector velocity and a scalar depth".into(),
            ));
        }
        if !std::sync::Arc::ptr_eq(u.space().mesh(), h.space().mesh()) {
            return Err(Error::SpaceMismatch(
                "velocity and depth live on different meshes".into(),
            ));
        }
        Ok(Self { u, h, t })
    }

    /// Copy with new coefficient vectors on the same spaces.
    pub fn with_coeffs(&self, u: Vec<f64>, h: Vec<f64>, t: f64) -> Result<Self> {
        Ok(Self {
            u: Field::new(self.u.space().clone(), u)?,
            h: Field::new(self.h.space().clone(), h)?,
            t,
        })
    }
}
