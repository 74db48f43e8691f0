//! Independent numeric check of second prolongation: transform the graph of
//! a sample polynomial `u(x,y,t)` by the flow to first order in ε and
//! differentiate the transformed jet in ε by central differences.

#![allow(dead_code)]

use lieclass_core::jets::{prolong2, JetSpace};
use lieclass_core::symcore::Atom;
use lieclass_core::{Expr, VectorField};
use num_traits::ToPrimitive;
use rand::Rng;

/// Second-order forward jet in three variables.
#[derive(Clone, Copy, Debug)]
pub struct J2 {
    pub v: f64,
    pub g: [f64; 3],
    pub h: [[f64; 3]; 3],
}

impl J2 {
    pub fn constant(c: f64) -> J2 {
        J2 { v: c, g: [0.0; 3], h: [[0.0; 3]; 3] }
    }

    pub fn var(i: usize, at: f64) -> J2 {
        let mut j = J2::constant(at);
        j.g[i] = 1.0;
        j
    }

    pub fn add(&self, o: &J2) -> J2 {
        let mut r = *self;
        r.v += o.v;
        for i in 0..3 {
            r.g[i] += o.g[i];
            for k in 0..3 {
                r.h[i][k] += o.h[i][k];
            }
        }
        r
    }

    pub fn scale(&self, c: f64) -> J2 {
        let mut r = *self;
        r.v *= c;
        for i in 0..3 {
            r.g[i] *= c;
            for k in 0..3 {
                r.h[i][k] *= c;
            }
        }
        r
    }

    pub fn mul(&self, o: &J2) -> J2 {
        let mut r = J2::constant(self.v * o.v);
        for i in 0..3 {
            r.g[i] = self.g[i] * o.v + self.v * o.g[i];
            for k in 0..3 {
                r.h[i][k] = self.h[i][k] * o.v
                    + self.g[i] * o.g[k]
                    + self.g[k] * o.g[i]
                    + self.v * o.h[i][k];
            }
        }
        r
    }
}

/// Random polynomial of total degree ≤ 4 in (x, y, t) with small coefficients.
pub struct SamplePoly {
    terms: Vec<([u32; 3], f64)>,
}

impl SamplePoly {
    pub fn random(rng: &mut impl Rng) -> SamplePoly {
        let mut terms = Vec::new();
        for a in 0..=4u32 {
            for b in 0..=(4 - a) {
                for c in 0..=(4 - a - b) {
                    if rng.random_bool(0.5) {
                        terms.push(([a, b, c], rng.random_range(-2.0..2.0)));
                    }
                }
            }
        }
        SamplePoly { terms }
    }

    pub fn jet(&self, p: [f64; 3]) -> J2 {
        let xs = [J2::var(0, p[0]), J2::var(1, p[1]), J2::var(2, p[2])];
        let mut out = J2::constant(0.0);
        for (e, c) in &self.terms {
            let mut t = J2::constant(*c);
            for i in 0..3 {
                for _ in 0..e[i] {
                    t = t.mul(&xs[i]);
                }
            }
            out = out.add(&t);
        }
        out
    }
}

/// Evaluates a polynomial expression in x, y, t, u over jets.
fn eval_j2(e: &Expr, x: &[J2; 3], u: &J2) -> J2 {
    assert!(e.denominator().is_one(), "polynomial coefficients only");
    let mut out = J2::constant(0.0);
    for (m, c) in e.numerator().terms() {
        let mut t = J2::constant(c.to_f64().unwrap());
        for (a, k) in m.powers() {
            let base = match a.as_symbol().map(|s| s.name()) {
                Some("x") => x[0],
                Some("y") => x[1],
                Some("t") => x[2],
                Some("u") => *u,
                other => panic!("unexpected atom {:?}", other),
            };
            for _ in 0..*k {
                t = t.mul(&base);
            }
        }
        out = out.add(&t);
    }
    out
}

fn inv3(m: [[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    let mut r = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (a, b) = ((j + 1) % 3, (j + 2) % 3);
            let (c, d) = ((i + 1) % 3, (i + 2) % 3);
            r[i][j] = (m[a][c] * m[b][d] - m[a][d] * m[b][c]) / det;
        }
    }
    r
}

/// Gradient and Hessian at `X_ε(p)` of the transformed function.
fn transformed_jet(x: &VectorField, u: &SamplePoly, p: [f64; 3], eps: f64) -> ([f64; 3], [[f64; 3]; 3]) {
    let xs = [J2::var(0, p[0]), J2::var(1, p[1]), J2::var(2, p[2])];
    let uj = u.jet(p);
    let names = ["x", "y", "t"];
    let big_x: Vec<J2> = (0..3)
        .map(|i| xs[i].add(&eval_j2(&x.coeff(names[i]), &xs, &uj).scale(eps)))
        .collect();
    let big_u = uj.add(&eval_j2(&x.coeff("u"), &xs, &uj).scale(eps));
    // Jacobian J[i][k] = ∂X_i/∂x_k.
    let mut jac = [[0.0; 3]; 3];
    for i in 0..3 {
        jac[i] = big_x[i].g;
    }
    let jinv = inv3(jac);
    // ∇ũ = J^{-T} ∇U
    let mut g = [0.0; 3];
    for i in 0..3 {
        for k in 0..3 {
            g[i] += jinv[k][i] * big_u.g[k];
        }
    }
    // H̃ = J^{-T} (H_U − Σ_m g_m H_{X_m}) J^{-1}
    let mut inner = big_u.h;
    for m in 0..3 {
        for a in 0..3 {
            for b in 0..3 {
                inner[a][b] -= g[m] * big_x[m].h[a][b];
            }
        }
    }
    let mut h = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut s = 0.0;
            for a in 0..3 {
                for b in 0..3 {
                    s += jinv[a][i] * inner[a][b] * jinv[b][j];
                }
            }
            h[i][j] = s;
        }
    }
    (g, h)
}

/// Largest discrepancy between symbolic `φ^J` and the flow construction at
/// point `p` for the sample `u`.
pub fn max_discrepancy(x: &VectorField, u: &SamplePoly, p: [f64; 3], step: f64) -> f64 {
    let js = JetSpace::standard();
    let pf = prolong2(&js, x).unwrap();
    // Central differences at h and h/2 combined by one Richardson step.
    let central = |h: f64| {
        let (gp, hp) = transformed_jet(x, u, p, h);
        let (gm, hm) = transformed_jet(x, u, p, -h);
        let mut g = [0.0; 3];
        let mut hh = [[0.0; 3]; 3];
        for i in 0..3 {
            g[i] = (gp[i] - gm[i]) / (2.0 * h);
            for j in 0..3 {
                hh[i][j] = (hp[i][j] - hm[i][j]) / (2.0 * h);
            }
        }
        (g, hh)
    };
    let (g1, h1) = central(step);
    let (g2, h2) = central(step / 2.0);
    let rich = |a: f64, b: f64| (4.0 * b - a) / 3.0;
    let uj = u.jet(p);
    let names = ["x", "y", "t"];
    let env = |a: &Atom| -> Option<f64> {
        let n = a.as_symbol()?.name().to_string();
        if let Some(i) = names.iter().position(|v| *v == n) {
            return Some(p[i]);
        }
        if n == "u" {
            return Some(uj.v);
        }
        let letters = n.strip_prefix("u_")?;
        let idx: Vec<usize> = letters
            .chars()
            .map(|c| names.iter().position(|v| v.starts_with(c)).unwrap())
            .collect();
        match idx.len() {
            1 => Some(uj.g[idx[0]]),
            2 => Some(uj.h[idx[0]][idx[1]]),
            _ => None,
        }
    };
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        let fd = rich(g1[i], g2[i]);
        let sym = pf.phi(js.jet(&[names[i]]).unwrap().name()).eval_f64(&env).unwrap();
        worst = worst.max((fd - sym).abs() / sym.abs().max(1.0));
        for j in i..3 {
            let fd = rich(h1[i][j], h2[i][j]);
            let jet = js.jet(&[names[i], names[j]]).unwrap();
            let sym = pf.phi(jet.name()).eval_f64(&env).unwrap();
            worst = worst.max((fd - sym).abs() / sym.abs().max(1.0));
        }
    }
    worst
}

/// Random point field with polynomial coefficients of degree ≤ 2 in (x,y,t,u).
pub fn random_point_field(rng: &mut impl Rng) -> VectorField {
    let monos = ["1", "x", "y", "t", "u", "x*y", "u*t", "x^2", "u^2", "y*u"];
    let mut pairs = Vec::new();
    for c in ["x", "y", "t", "u"] {
        let mut coeff = Expr::zero();
        for m in monos {
            if rng.random_bool(0.3) {
                let k = rng.random_range(-3i64..=3);
                let me = lieclass_core::fieldlang::parse_expression_free(m).unwrap();
                coeff = &coeff + &(&Expr::int(k) * &me);
            }
        }
        pairs.push((c, coeff));
    }
    VectorField::from_pairs(pairs)
}
