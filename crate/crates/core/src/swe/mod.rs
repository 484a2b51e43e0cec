//! The discretised rotating shallow-water equations.

pub mod operators;
mod params;
mod scheme;
mod state;

pub use operators::{assemble_div, assemble_mass, assemble_perp_grad_embedding};
pub use params::{Coriolis, Params};
pub use scheme::{Scheme, Tendency, WarmStart, MIN_DEPTH};
pub use state::State;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::ElementFamily;
    use crate::mesh::structured_mesh;
    use crate::Error;
    use std::sync::Arc;

    fn scheme(fam: ElementFamily, n: usize) -> Scheme {
        Scheme::new(Arc::new(structured_mesh(n).unwrap()), fam).unwrap()
    }

    fn rest(s: &Scheme, depth: f64) -> State {
        s.project_state(&|_| [0.0, 0.0], &|_| depth, 0.0).unwrap()
    }

    #[test]
    fn resting_state_has_uniform_pv() {
        for fam in ElementFamily::ALL {
            let s = scheme(fam, 4);
            let st = rest(&s, 1.0);
            let q = s.diagnose_q(&st, &Params::new(5.0, 5.0)).unwrap();
            assert!(q.coeffs().iter().all(|&v| (v - 5.0).abs() < 1e-10), "{fam}");
            assert!((s.enstrophy(&st, &q) - 25.0).abs() < 1e-9);
            assert!((s.total_vorticity(&st, &q) - 5.0).abs() < 1e-10);
            assert!((s.total_mass(&st) - 1.0).abs() < 1e-13);
            assert!((s.energy(&st, &Params::new(5.0, 5.0)) - 2.5).abs() < 1e-13);
        }
    }

    #[test]
    fn resting_state_is_steady() {
        for fam in ElementFamily::ALL {
            let s = scheme(fam, 4);
            let st = rest(&s, 2.0);
            let t = s
                .tendency(&st, &Params::new(5.0, 5.0).with_apvm(0.1))
                .unwrap();
            assert!(t.du.iter().chain(&t.dh).all(|v| v.abs() < 1e-12), "{fam}");
            assert!(
                s.geostrophic_imbalance(&st, &Params::new(5.0, 5.0))
                    .unwrap()
                    < 1e-12
            );
        }
    }

    #[test]
    fn unit_depth_flux_equals_velocity() {
        let s = scheme(ElementFamily::Bdfm1, 4);
        let st = s
            .project_state(&|p| [(6.0 * p[1]).sin(), (6.3 * p[0]).cos()], &|_| 1.0, 0.0)
            .unwrap();
        let f = s.project_flux(&st).unwrap();
        for (a, b) in f.coeffs().iter().zip(st.u.coeffs()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_dry_state() {
        let s = scheme(ElementFamily::Rt0, 3);
        let st = rest(&s, -1.0);
        assert!(matches!(
            s.tendency(&st, &Params::new(1.0, 1.0)),
            Err(Error::NonPositiveDepth { .. })
        ));
    }

    #[test]
    fn zero_tau_leaves_pv_unchanged() {
        let s = scheme(ElementFamily::Bdm1, 4);
        let st = s
            .project_state(
                &|p| [p[1].sin(), p[0].cos()],
                &|p| 1.0 + 0.1 * p[0].sin(),
                0.0,
            )
            .unwrap();
        let q = s.diagnose_q(&st, &Params::new(3.0, 1.0)).unwrap();
        let a = s.apvm_q_star(&q, &st.u, 0.0);
        let b = s.apvm_q_star(&q, &st.u, 0.3);
        let c = s.apvm_q_star(&q, &st.u, 0.0);
        assert_eq!(a, c);
        assert!(a.iter().zip(&b).any(|(x, y)| x != y));
    }
}
