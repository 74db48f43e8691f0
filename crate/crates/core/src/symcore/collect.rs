use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::One;

use super::error::SymError;
use super::expr::{Atom, Expr};
use super::poly::{Mono, Poly};

/// Power product of marker atoms; the empty product is the remainder key `1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct MarkerMonomial(pub Vec<(Atom, u32)>);

impl MarkerMonomial {
    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, k)| k).sum()
    }

    pub fn to_expr(&self) -> Expr {
        Expr::from_poly(Poly::term(
            Mono {
                exp: None,
                pows: self.0.clone(),
            },
            BigRational::one(),
        ))
    }
}

impl fmt::Display for MarkerMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}

fn marker_inside(e: &Expr, is_marker: &dyn Fn(&Atom) -> bool) -> Option<Atom> {
    e.atoms().into_iter().find(|a| is_marker(a)).or_else(|| {
        for p in [&e.num, &e.den] {
            for (m, _) in p.terms() {
                if let Some(x) = m.exp_arg().and_then(|x| marker_inside(x, is_marker)) {
                    return Some(x);
                }
            }
        }
        None
    })
}

/// Splits `e` as `Σ coeff(m)·m` over monomials `m` in the atoms accepted by
/// `is_marker`. Function atoms whose arguments mention markers are opaque
/// coefficients; markers in a denominator or exponential are rejected.
pub fn collect_by(
    e: &Expr,
    is_marker: &dyn Fn(&Atom) -> bool,
) -> Result<BTreeMap<MarkerMonomial, Expr>, SymError> {
    if let Some(a) = marker_inside(&Expr::from_poly(e.den.clone()), is_marker) {
        return Err(SymError::NotPolynomial(Expr::atom(a).to_string()));
    }
    let den = Expr::from_poly(e.den.clone());
    let mut parts: BTreeMap<MarkerMonomial, Poly> = BTreeMap::new();
    for (m, c) in e.num.terms() {
        if let Some(a) = m.exp_arg().and_then(|x| marker_inside(x, is_marker)) {
            return Err(SymError::NotPolynomial(Expr::atom(a).to_string()));
        }
        let (mk, rest): (Vec<_>, Vec<_>) =
            m.pows.iter().cloned().partition(|(a, _)| is_marker(a));
        let rest = Mono {
            exp: m.exp.clone(),
            pows: rest,
        };
        parts
            .entry(MarkerMonomial(mk))
            .or_default()
            .add_term(rest, c.clone());
    }
    let mut out = BTreeMap::new();
    for (k, p) in parts {
        if p.is_zero() {
            continue;
        }
        let coeff = Expr::from_poly(p).try_div(&den)?;
        out.insert(k, coeff);
    }
    Ok(out)
}

/// [`collect_by`] with an explicit marker set. Monomials given as markers
/// contribute all of their atoms.
pub fn collect(e: &Expr, markers: &[Expr]) -> Result<BTreeMap<MarkerMonomial, Expr>, SymError> {
    let mut atoms = Vec::new();
    for m in markers {
        atoms.extend(m.atoms());
    }
    collect_by(e, &|a| atoms.contains(a))
}
