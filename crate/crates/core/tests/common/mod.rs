#![allow(dead_code)]

use std::f64::consts::PI;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use swe_core::fem::ElementFamily;
use swe_core::mesh::{read_msh, structured_mesh, Mesh};
use swe_core::swe::{Scheme, State};

pub fn mesh_path(name: &str) -> String {
    format!("{}/../../meshes/{name}", env!("CARGO_MANIFEST_DIR"))
}

pub fn structured(n: usize) -> Arc<Mesh> {
    Arc::new(structured_mesh(n).unwrap())
}

pub fn unstructured(name: &str) -> Arc<Mesh> {
    Arc::new(read_msh(mesh_path(name)).unwrap())
}

pub fn scheme(mesh: Arc<Mesh>, fam: ElementFamily) -> Scheme {
    Scheme::new(mesh, fam).unwrap()
}

/// Random trigonometric polynomial with wavenumbers up to 2 in each direction.
#[derive(Debug, Clone)]
pub struct Smooth {
    terms: Vec<(f64, f64, f64, f64)>,
}

impl Smooth {
    pub fn random(rng: &mut ChaCha8Rng, amplitude: f64) -> Self {
        let mut terms = Vec::new();
        for kx in -2i32..=2 {
            for ky in 0i32..=2 {
                if kx == 0 && ky == 0 {
                    continue;
                }
                terms.push((
                    kx as f64,
                    ky as f64,
                    amplitude * rng.gen_range(-1.0..1.0) / 14.0,
                    rng.gen_range(0.0..2.0 * PI),
                ));
            }
        }
        Self { terms }
    }

    pub fn eval(&self, p: [f64; 2]) -> f64 {
        self.terms
            .iter()
            .map(|&(kx, ky, a, ph)| a * (2.0 * PI * (kx * p[0] + ky * p[1]) + ph).cos())
            .sum()
    }
}

/// Smooth random state with `|u| ≲ 1` and depth in `[0.8, 1.2]`.
pub fn random_state(s: &Scheme, seed: u64) -> State {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (ux, uy, hh) = (
        Smooth::random(&mut rng, 1.0),
        Smooth::random(&mut rng, 1.0),
        Smooth::random(&mut rng, 0.2),
    );
    s.project_state(&|p| [ux.eval(p), uy.eval(p)], &|p| 1.0 + hh.eval(p), 0.0)
        .unwrap()
}

/// Least-squares slope of `log y` against `log x`.
pub fn slope(x: &[f64], y: &[f64]) -> f64 {
    swe_core::experiments::loglog_slope(x, y)
}
