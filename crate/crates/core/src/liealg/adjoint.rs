use num_traits::{One, Zero};

use crate::symcore::{Expr, Substitution, Symbol};

use super::exppoly::ExpPoly;
use super::linalg::{self, q, Q};
use super::{ad_matrix, render_combination, span_coordinates, LieAlgebraPresentation, LieError};

/// `Ad(exp(s·Y_i))` acting on coefficient vectors: column `j` holds the
/// image of `Y_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjointMatrix {
    pub generator: usize,
    pub eigenvalues: Vec<i64>,
    pub entries: Vec<Vec<ExpPoly>>,
}

/// `exp(−s·ad Y_i)` by the Putzer recurrence over the integer spectrum.
pub fn adjoint_exp(p: &LieAlgebraPresentation, i: usize) -> Result<AdjointMatrix, LieError> {
    let a = ad_matrix(p, i)?;
    let n = a.len();
    let b = linalg::mat_scale(&a, &-Q::one());
    let cp = linalg::char_poly(&b);
    let eig = linalg::integer_roots(&cp).ok_or_else(|| LieError::NonIntegerSpectrum {
        generator: i,
        char_poly: cp.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", "),
    })?;

    let mut entries = vec![vec![ExpPoly::zero(); n]; n];
    let mut pk = linalg::identity(n);
    let mut r = ExpPoly::term(Q::one(), eig[0], 0);
    for k in 0..n {
        if k > 0 {
            pk = linalg::mat_mul(&pk, &linalg::mat_add_scaled_identity(&b, &-q(eig[k - 1])));
            // r_{k+1}(s) = e^{λs} ∫_0^s e^{−λτ} r_k(τ) dτ
            r = r.shift(-eig[k]).integral().shift(eig[k]);
        }
        for (row, prow) in entries.iter_mut().zip(&pk) {
            for (e, c) in row.iter_mut().zip(prow) {
                if !c.is_zero() {
                    *e = &*e + &r.scale(c);
                }
            }
        }
    }
    Ok(AdjointMatrix {
        generator: i,
        eigenvalues: eig,
        entries,
    })
}

/// Term-by-term series `Σ_n (−s)^n/n! ad(Y_i)^n Y_j` up to `order`,
/// computed from brackets of the fields. Entry `[n][k]` is the
/// coefficient of `s^n Y_k`.
pub fn lie_series(
    p: &LieAlgebraPresentation,
    i: usize,
    j: usize,
    order: u32,
) -> Result<Vec<Vec<Q>>, LieError> {
    let mut z = p.basis[j].clone();
    let mut out = Vec::new();
    let mut fact = Q::one();
    for n in 0..=order {
        if n > 0 {
            z = p.basis[i].bracket(&z);
            fact = fact * q(-1) / q(n as i64);
        }
        let coords = span_coordinates(&p.basis, &z).ok_or_else(|| {
            LieError::NotClosed(super::NonClosed {
                i,
                j,
                residual: z.clone(),
            })
        })?;
        out.push(coords.iter().map(|c| c * &fact).collect());
    }
    Ok(out)
}

impl AdjointMatrix {
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// Image of the coefficient vector `a`.
    pub fn apply(&self, a: &[Q]) -> Vec<ExpPoly> {
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .zip(a)
                    .filter(|(_, c)| !c.is_zero())
                    .fold(ExpPoly::zero(), |acc, (e, c)| &acc + &e.scale(c))
            })
            .collect()
    }

    pub fn apply_poly(&self, a: &[ExpPoly]) -> Vec<ExpPoly> {
        self.entries
            .iter()
            .map(|row| row.iter().zip(a).fold(ExpPoly::zero(), |acc, (e, c)| &acc + &(e * c)))
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<ExpPoly> {
        self.entries.iter().map(|row| row[j].clone()).collect()
    }

    pub fn is_identity_at_zero(&self) -> bool {
        let n = self.dim();
        (0..n).all(|k| (0..n).all(|j| self.entries[k][j].at_zero() == if k == j { Q::one() } else { Q::zero() }))
    }

    /// Taylor coefficients of column `j`: `[n][k]` multiplies `s^n Y_k`.
    pub fn taylor_column(&self, j: usize, order: u32) -> Vec<Vec<Q>> {
        let cols: Vec<Vec<Q>> = self.entries.iter().map(|row| row[j].taylor(order)).collect();
        (0..=order as usize)
            .map(|n| cols.iter().map(|c| c[n].clone()).collect())
            .collect()
    }

    pub fn to_exprs(&self, s: &Symbol) -> Vec<Vec<Expr>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(|e| e.to_expr(s)).collect())
            .collect()
    }

    /// `M(s₁)·M(s₂) = M(s₁+s₂)`, checked symbolically.
    pub fn satisfies_group_law(&self) -> bool {
        let s = Symbol::new("s");
        let base = self.to_exprs(&s);
        let at = |v: Expr| -> Vec<Vec<Expr>> {
            let sub = Substitution::new().bind_symbol(s.clone(), v);
            base.iter()
                .map(|r| r.iter().map(|e| e.substitute(&sub).expect("acyclic")).collect())
                .collect()
        };
        let s1 = Expr::sym("s1");
        let s2 = Expr::sym("s2");
        let m1 = at(s1.clone());
        let m2 = at(s2.clone());
        let m12 = at(&s1 + &s2);
        let n = self.dim();
        (0..n).all(|k| {
            (0..n).all(|j| {
                let prod: Expr = (0..n).map(|l| &m1[k][l] * &m2[l][j]).sum();
                (&prod - &m12[k][j]).is_zero()
            })
        })
    }

    /// Table-style rendering of `Ad(exp(s·Y_i)) Y_j`.
    pub fn entry_string(&self, j: usize, names: &[String]) -> String {
        render_combination(&self.column(j), names, Some(j), ExpPoly::is_zero)
    }

    /// Floating matrix at `s`.
    pub fn eval_f64(&self, s: f64) -> Vec<Vec<f64>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(|e| e.eval_f64(s)).collect())
            .collect()
    }
}

