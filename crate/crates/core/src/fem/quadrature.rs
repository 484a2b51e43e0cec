//! Gauss rules on the unit interval and the reference triangle.
//!
//! Triangle rules are collapsed (Duffy) tensor products of Gauss–Legendre
//! rules: `x = s (1 - t)`, `y = t`, with the Jacobian `(1 - t)` folded into
//! the weights. A rule of exactness `d` uses `ceil((d+1)/2)` points in `s`
//! and `ceil((d+2)/2)` in `t`; every weight is positive.

use crate::error::{Error, Result};

/// Highest exactness degree offered by [`triangle_quadrature`].
pub const MAX_TRIANGLE_DEGREE: usize = 40;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    /// Reference-triangle points `(x, y)`.
    pub points: Vec<[f64; 2]>,
    /// Weights summing to the reference area `1/2`.
    pub weights: Vec<f64>,
    pub degree: usize,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn integrate(&self, f: impl Fn([f64; 2]) -> f64) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&p, &w)| w * f(p))
            .sum()
    }
}

/// `n`-point Gauss–Legendre rule on `[0, 1]`: `(nodes, weights)`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "Gauss-Legendre rule needs at least one point");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Newton iteration from the Chebyshev-like initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // map [-1, 1] -> [0, 1]
        nodes[i] = 0.5 * (1.0 - x);
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = 0.5 * w;
        weights[n - 1 - i] = 0.5 * w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let nf = n as f64;
    let dp = nf * (x * p - p0) / (x * x - 1.0);
    (p, dp)
}

/// Rule on the reference triangle exact for polynomials of total degree
/// `exactness_degree`.
pub fn triangle_quadrature(exactness_degree: usize) -> Result<QuadratureRule> {
    if exactness_degree == 0 || exactness_degree > MAX_TRIANGLE_DEGREE {
        return Err(Error::UnsupportedQuadrature {
            requested: exactness_degree,
            max: MAX_TRIANGLE_DEGREE,
        });
    }
    let ns = (exactness_degree + 1).div_ceil(2);
    let nt = (exactness_degree + 2).div_ceil(2);
    let (s_nodes, s_weights) = gauss_legendre(ns);
    let (t_nodes, t_weights) = gauss_legendre(nt);
    let mut points = Vec::with_capacity(ns * nt);
    let mut weights = Vec::with_capacity(ns * nt);
    for (t, wt) in t_nodes.iter().zip(&t_weights) {
        for (s, ws) in s_nodes.iter().zip(&s_weights) {
            points.push([s * (1.0 - t), *t]);
            weights.push(ws * wt * (1.0 - t));
        }
    }
    Ok(QuadratureRule {
        points,
        weights,
        degree: exactness_degree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: u32) -> f64 {
        (1..=n).map(f64::from).product()
    }

    /// ∫_T x^a y^b = a! b! / (a + b + 2)!
    fn monomial_integral(a: u32, b: u32) -> f64 {
        factorial(a) * factorial(b) / factorial(a + b + 2)
    }

    #[test]
    fn area_and_centroid() {
        let r = triangle_quadrature(1).unwrap();
        assert!((r.integrate(|_| 1.0) - 0.5).abs() < 1e-15);
        assert!((r.integrate(|p| p[0]) - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn x2y2() {
        let r = triangle_quadrature(4).unwrap();
        let v = r.integrate(|p| p[0] * p[0] * p[1] * p[1]);
        assert!((v - 1.0 / 180.0).abs() < 1e-15);
        assert!((monomial_integral(2, 2) - 1.0 / 180.0).abs() < 1e-18);
    }

    #[test]
    fn exact_on_all_monomials_up_to_degree() {
        for d in 1..=20 {
            let r = triangle_quadrature(d).unwrap();
            assert!(r.weights.iter().all(|&w| w > 0.0));
            for a in 0..=d as u32 {
                for b in 0..=(d as u32 - a) {
                    let v = r.integrate(|p| p[0].powi(a as i32) * p[1].powi(b as i32));
                    let exact = monomial_integral(a, b);
                    assert!(
                        (v - exact).abs() <= 1e-14 * exact.max(1e-3),
                        "degree {d}: x^{a} y^{b}: {v} vs {exact}"
                    );
                }
            }
        }
    }

    #[test]
    fn unsupported_degrees() {
        assert!(triangle_quadrature(0).is_err());
        assert!(triangle_quadrature(MAX_TRIANGLE_DEGREE + 1).is_err());
        assert!(triangle_quadrature(10).is_ok());
    }

    #[test]
    fn gauss_legendre_interval() {
        for n in 1..12 {
            let (x, w) = gauss_legendre(n);
            for k in 0..(2 * n) as i32 {
                let v: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k)).sum();
                assert!((v - 1.0 / (k as f64 + 1.0)).abs() < 1e-14, "n={n} k={k}");
            }
        }
    }
}
