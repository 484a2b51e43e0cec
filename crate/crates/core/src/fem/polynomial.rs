//! Bivariate polynomials of total degree at most 3 on the reference triangle.

use std::ops::{Add, Mul, Sub};

pub const MAX_DEGREE: usize = 3;
const N: usize = MAX_DEGREE + 1;

/// `sum c[a][b] x^a y^b` with `a + b <= MAX_DEGREE`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Poly {
    c: [[f64; N]; N],
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(v: f64) -> Self {
        Self::monomial(0, 0, v)
    }

    pub fn monomial(a: usize, b: usize, coeff: f64) -> Self {
        assert!(
            a + b <= MAX_DEGREE,
            "monomial degree {} exceeds {MAX_DEGREE}",
            a + b
        );
        let mut p = Self::zero();
        p.c[a][b] = coeff;
        p
    }

    pub fn x() -> Self {
        Self::monomial(1, 0, 1.0)
    }

    pub fn y() -> Self {
        Self::monomial(0, 1, 1.0)
    }

    /// Barycentric coordinates of the reference triangle.
    pub fn barycentric(i: usize) -> Self {
        match i {
            0 => Self::constant(1.0) - Self::x() - Self::y(),
            1 => Self::x(),
            2 => Self::y(),
            _ => panic!("barycentric index {i} out of range"),
        }
    }

    /// All monomials `x^a y^b` with `a + b <= degree`, by increasing degree.
    pub fn monomials(degree: usize) -> Vec<Self> {
        (0..=degree)
            .flat_map(|d| (0..=d).map(move |b| Self::monomial(d - b, b, 1.0)))
            .collect()
    }

    pub fn scale(mut self, s: f64) -> Self {
        for row in self.c.iter_mut() {
            for v in row.iter_mut() {
                *v *= s;
            }
        }
        self
    }

    pub fn degree(&self) -> usize {
        let mut d = 0;
        for a in 0..N {
            for b in 0..N - a {
                if self.c[a][b] != 0.0 {
                    d = d.max(a + b);
                }
            }
        }
        d
    }

    pub fn eval(&self, p: [f64; 2]) -> f64 {
        let mut xs = [1.0; N];
        let mut ys = [1.0; N];
        for k in 1..N {
            xs[k] = xs[k - 1] * p[0];
            ys[k] = ys[k - 1] * p[1];
        }
        let mut v = 0.0;
        for a in 0..N {
            for b in 0..N - a {
                v += self.c[a][b] * xs[a] * ys[b];
            }
        }
        v
    }

    pub fn dx(&self) -> Self {
        let mut p = Self::zero();
        for a in 1..N {
            for b in 0..N - a {
                p.c[a - 1][b] = a as f64 * self.c[a][b];
            }
        }
        p
    }

    pub fn dy(&self) -> Self {
        let mut p = Self::zero();
        for a in 0..N {
            for b in 1..N - a {
                p.c[a][b - 1] = b as f64 * self.c[a][b];
            }
        }
        p
    }

    pub fn grad(&self, p: [f64; 2]) -> [f64; 2] {
        [self.dx().eval(p), self.dy().eval(p)]
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        for a in 0..N {
            for b in 0..N {
                self.c[a][b] += rhs.c[a][b];
            }
        }
        self
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        self + rhs.scale(-1.0)
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        let mut out = Poly::zero();
        for a in 0..N {
            for b in 0..N - a {
                if self.c[a][b] == 0.0 {
                    continue;
                }
                for c in 0..N {
                    for d in 0..N - c {
                        if rhs.c[c][d] == 0.0 {
                            continue;
                        }
                        assert!(
                            a + b + c + d <= MAX_DEGREE,
                            "product exceeds degree {MAX_DEGREE}"
                        );
                        out.c[a + c][b + d] += self.c[a][b] * rhs.c[c][d];
                    }
                }
            }
        }
        out
    }
}

/// Vector-valued polynomial `(p0, p1)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct VecPoly(pub [Poly; 2]);

impl VecPoly {
    pub fn eval(&self, p: [f64; 2]) -> [f64; 2] {
        [self.0[0].eval(p), self.0[1].eval(p)]
    }

    pub fn div(&self, p: [f64; 2]) -> f64 {
        self.0[0].dx().eval(p) + self.0[1].dy().eval(p)
    }

    pub fn scale(self, s: f64) -> Self {
        VecPoly([self.0[0].scale(s), self.0[1].scale(s)])
    }

    /// Constant vector times a scalar polynomial.
    pub fn along(p: Poly, v: [f64; 2]) -> Self {
        VecPoly([p.scale(v[0]), p.scale(v[1])])
    }
}

impl Add for VecPoly {
    type Output = VecPoly;
    fn add(self, rhs: VecPoly) -> VecPoly {
        VecPoly([self.0[0] + rhs.0[0], self.0[1] + rhs.0[1]])
    }
}
