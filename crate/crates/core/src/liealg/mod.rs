//! Finite-dimensional Lie algebras of vector fields: structure constants,
//! adjoint matrices and the closed-form adjoint action.

mod adjoint;
mod exppoly;
pub mod linalg;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::field::VectorField;
use crate::symcore::{Atom, Expr, Symbol};

pub use adjoint::{adjoint_exp, lie_series, AdjointMatrix};
pub use exppoly::{ExpPoly, ParamValue};
pub use linalg::{Matrix, Q};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LieError {
    #[error("basis is linearly dependent")]
    DependentBasis,
    #[error("basis does not close: [{}, {}] leaves the span", .0.i + 1, .0.j + 1)]
    NotClosed(NonClosed),
    #[error("ad of generator {} has non-integer spectrum (characteristic polynomial coefficients {char_poly})", .generator + 1)]
    NonIntegerSpectrum { generator: usize, char_poly: String },
    #[error("generator index {0} out of range")]
    Index(usize),
}

/// A bracket `[Y_i, Y_j]` outside the span of the basis.
#[derive(Debug, Clone, PartialEq)]
pub struct NonClosed {
    pub i: usize,
    pub j: usize,
    pub residual: VectorField,
}

impl Serialize for NonClosed {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("NonClosed", 3)?;
        st.serialize_field("i", &(self.i + 1))?;
        st.serialize_field("j", &(self.j + 1))?;
        st.serialize_field("residual", &self.residual.to_string())?;
        st.end()
    }
}

pub fn bracket(x: &VectorField, y: &VectorField) -> VectorField {
    x.bracket(y)
}

/// Named basis with its structure tensor. Indices are 0-based; names
/// carry the user-facing labels.
#[derive(Debug, Clone)]
pub struct LieAlgebraPresentation {
    pub names: Vec<String>,
    pub basis: Vec<VectorField>,
    /// `c[i][j][k]`: `[Y_i, Y_j] = Σ_k c[i][j][k] Y_k`.
    pub c: Vec<Vec<Vec<Q>>>,
    pub closed: bool,
    pub witnesses: Vec<NonClosed>,
}

fn lambda(k: usize) -> Symbol {
    Symbol::new(&format!("λ{}", k))
}

/// Equations `Σ_k λ_k Y_k = target`, one per coordinate monomial.
fn span_system(basis: &[VectorField], target: &VectorField) -> (Vec<Vec<Q>>, Vec<Q>) {
    let n = basis.len();
    let lambdas: Vec<Symbol> = (0..n).map(lambda).collect();
    let mut coords: BTreeSet<Symbol> = target.coordinates().cloned().collect();
    for b in basis {
        coords.extend(b.coordinates().cloned());
    }
    type Key = (Vec<(Atom, u32)>, Option<Expr>);
    let mut rows: BTreeMap<(Symbol, Key), (Vec<Q>, Q)> = BTreeMap::new();
    for a in coords {
        let mut e = -&target.coeff_of(&a);
        for (k, b) in basis.iter().enumerate() {
            e = &e + &(&Expr::symbol(&lambdas[k]) * &b.coeff_of(&a));
        }
        for (m, c) in e.numerator().terms() {
            let mut which = None;
            let mut rest = Vec::new();
            for (atom, p) in m.powers() {
                match atom.as_symbol().and_then(|s| lambdas.iter().position(|l| l == s)) {
                    Some(k) => which = Some(k),
                    None => rest.push((atom.clone(), *p)),
                }
            }
            let key = (a.clone(), (rest, m.exp_arg().cloned()));
            let row = rows
                .entry(key)
                .or_insert_with(|| (vec![Q::zero(); n], Q::zero()));
            match which {
                Some(k) => row.0[k] += c,
                None => row.1 -= c,
            }
        }
    }
    rows.into_values().unzip()
}

/// Coordinates of `target` in the span of `basis`, if it lies there.
pub fn span_coordinates(basis: &[VectorField], target: &VectorField) -> Option<Vec<Q>> {
    if target.is_zero() {
        return Some(vec![Q::zero(); basis.len()]);
    }
    let (rows, rhs) = span_system(basis, target);
    linalg::solve(&rows, &rhs).0
}

fn basis_rank(basis: &[VectorField]) -> usize {
    // Any nonzero target forces the λ-rows of every basis monomial.
    let (rows, rhs) = span_system(basis, &VectorField::zero());
    linalg::solve(&rows, &rhs).1
}

pub fn structure_constants(
    names: Vec<String>,
    basis: Vec<VectorField>,
) -> Result<LieAlgebraPresentation, LieError> {
    let n = basis.len();
    if basis_rank(&basis) < n {
        return Err(LieError::DependentBasis);
    }
    let mut c = vec![vec![vec![Q::zero(); n]; n]; n];
    let mut witnesses = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let z = basis[i].bracket(&basis[j]);
            match span_coordinates(&basis, &z) {
                Some(v) => {
                    for k in 0..n {
                        c[j][i][k] = -v[k].clone();
                        c[i][j][k] = v[k].clone();
                    }
                }
                None => witnesses.push(NonClosed { i, j, residual: z }),
            }
        }
    }
    Ok(LieAlgebraPresentation {
        names,
        basis,
        c,
        closed: witnesses.is_empty(),
        witnesses,
    })
}

/// Renders `Σ coeffs[k]·names[k]` in the table style: `-Y3`, `Y4 + s*Y3`.
pub fn render_combination<T: fmt::Display>(
    coeffs: &[T],
    names: &[String],
    lead: Option<usize>,
    is_zero: impl Fn(&T) -> bool,
) -> String {
    let mut parts: Vec<String> = Vec::new();
    let order = lead
        .into_iter()
        .chain((0..coeffs.len()).filter(|k| Some(*k) != lead));
    for k in order {
        let c = &coeffs[k];
        if is_zero(c) {
            continue;
        }
        let txt = c.to_string();
        let (neg, body) = match txt.strip_prefix('-') {
            Some(rest) if !rest.contains(" + ") && !rest.contains(" - ") => (true, rest.to_string()),
            _ => (false, txt.clone()),
        };
        let compound = body.contains(" + ") || body.contains(" - ");
        let term = match body.as_str() {
            "1" => names[k].clone(),
            _ if compound => format!("({})*{}", body, names[k]),
            _ => format!("{}*{}", body, names[k]),
        };
        parts.push(if neg { format!("-{}", term) } else { term });
    }
    if parts.is_empty() {
        return "0".into();
    }
    let mut out = parts[0].clone();
    for p in &parts[1..] {
        match p.strip_prefix('-') {
            Some(rest) => {
                out.push_str(" - ");
                out.push_str(rest);
            }
            None => {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
    }
    out
}

impl LieAlgebraPresentation {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn require_closed(&self) -> Result<(), LieError> {
        match self.witnesses.first() {
            Some(w) => Err(LieError::NotClosed(w.clone())),
            None => Ok(()),
        }
    }

    /// `[v, w]` for coefficient vectors.
    pub fn bracket_coords(&self, v: &[Q], w: &[Q]) -> Vec<Q> {
        let n = self.dim();
        let mut out = vec![Q::zero(); n];
        for i in 0..n {
            if v[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if w[j].is_zero() {
                    continue;
                }
                let vw = &v[i] * &w[j];
                for k in 0..n {
                    if !self.c[i][j][k].is_zero() {
                        out[k] += &vw * &self.c[i][j][k];
                    }
                }
            }
        }
        out
    }

    /// The field `Σ a_k Y_k`.
    pub fn combine(&self, a: &[Q]) -> VectorField {
        let mut out = VectorField::zero();
        for (c, y) in a.iter().zip(&self.basis) {
            if !c.is_zero() {
                out = out.add(&y.scale(&Expr::rational(c.clone())));
            }
        }
        out
    }

    pub fn commutator_entry(&self, i: usize, j: usize) -> String {
        render_combination(&self.c[i][j], &self.names, None, |q: &Q| q.is_zero())
    }

    /// Triples `(i, j, k)` where the tensor Jacobi sum is nonzero.
    pub fn jacobi_defects(&self) -> Vec<(usize, usize, usize)> {
        let n = self.dim();
        let e = |i: usize| {
            let mut v = vec![Q::zero(); n];
            v[i] = Q::one();
            v
        };
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let a = self.bracket_coords(&e(i), &self.bracket_coords(&e(j), &e(k)));
                    let b = self.bracket_coords(&e(j), &self.bracket_coords(&e(k), &e(i)));
                    let c = self.bracket_coords(&e(k), &self.bracket_coords(&e(i), &e(j)));
                    if (0..n).any(|m| !(&a[m] + &b[m] + &c[m]).is_zero()) {
                        out.push((i, j, k));
                    }
                }
            }
        }
        out
    }

    /// Jacobi identity checked on the fields themselves.
    pub fn jacobi_fields_hold(&self) -> bool {
        let n = self.dim();
        let y = &self.basis;
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let s = y[i]
                        .bracket(&y[j].bracket(&y[k]))
                        .add(&y[j].bracket(&y[k].bracket(&y[i])))
                        .add(&y[k].bracket(&y[i].bracket(&y[j])));
                    if !s.is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Re-checks every bracket against the tensor on the fields.
    pub fn tensor_reproduces_brackets(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let lhs = self.basis[i].bracket(&self.basis[j]);
                lhs.sub(&self.combine(&self.c[i][j])).is_zero()
            })
        })
    }
}

/// `(ad Y_i)[k][j] = c[i][j][k]`, so that column `j` holds `ad(Y_i)Y_j`.
pub fn ad_matrix(p: &LieAlgebraPresentation, i: usize) -> Result<Matrix, LieError> {
    if i >= p.dim() {
        return Err(LieError::Index(i));
    }
    p.require_closed()?;
    let n = p.dim();
    Ok((0..n)
        .map(|k| (0..n).map(|j| p.c[i][j][k].clone()).collect())
        .collect())
}
