//! Shared fixtures for the solver benchmarks.

use std::f64::consts::PI;
use std::sync::Arc;

use swe_core::{structured_mesh, ElementFamily, Scheme, State};

/// Scheme on the structured `n × n` mesh with a smooth non-trivial state.
pub fn fixture(family: ElementFamily, n: usize) -> (Scheme, State) {
    let mesh = Arc::new(structured_mesh(n).expect("valid mesh size"));
    let scheme = Scheme::new(mesh, family).expect("scheme");
    let state = scheme
        .project_state(
            &|p| [(2.0 * PI * p[1]).sin(), 0.5 * (2.0 * PI * p[0]).cos()],
            &|p| 1.0 + 0.1 * (2.0 * PI * (p[0] + p[1])).sin(),
            0.0,
        )
        .expect("projection");
    (scheme, state)
}
