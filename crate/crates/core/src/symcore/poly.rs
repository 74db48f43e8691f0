//! Sparse multivariate polynomials over the rationals.
//!
//! Indeterminates are [`Atom`]s. A monomial may also carry one exponential
//! factor `exp(E)`; exponentials multiply by adding their keys, so the
//! exponential part of a monomial is a single canonical argument.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::expr::{Atom, Expr};

/// Power product of atoms times an optional exponential factor.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Mono {
    pub(crate) exp: Option<Arc<Expr>>,
    /// Sorted by atom, all exponents positive.
    pub(crate) pows: Vec<(Atom, u32)>,
}

impl Mono {
    pub fn one() -> Self {
        Mono::default()
    }

    pub fn atom(a: Atom, k: u32) -> Self {
        if k == 0 {
            return Mono::one();
        }
        Mono {
            exp: None,
            pows: vec![(a, k)],
        }
    }

    pub fn exponential(arg: Expr) -> Self {
        if arg.is_zero() {
            return Mono::one();
        }
        Mono {
            exp: Some(Arc::new(arg)),
            pows: Vec::new(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.exp.is_none() && self.pows.is_empty()
    }

    pub fn exp_arg(&self) -> Option<&Expr> {
        self.exp.as_deref()
    }

    pub fn powers(&self) -> &[(Atom, u32)] {
        &self.pows
    }

    pub fn degree_of(&self, a: &Atom) -> u32 {
        self.pows
            .binary_search_by(|(b, _)| b.cmp(a))
            .map(|i| self.pows[i].1)
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.pows.iter().map(|(_, k)| *k).sum()
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let mut pows = Vec::with_capacity(self.pows.len() + other.pows.len());
        let (mut i, mut j) = (0, 0);
        while i < self.pows.len() && j < other.pows.len() {
            match self.pows[i].0.cmp(&other.pows[j].0) {
                Ordering::Less => {
                    pows.push(self.pows[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    pows.push(other.pows[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    pows.push((self.pows[i].0.clone(), self.pows[i].1 + other.pows[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        pows.extend_from_slice(&self.pows[i..]);
        pows.extend_from_slice(&other.pows[j..]);
        let exp = match (&self.exp, &other.exp) {
            (None, None) => None,
            (Some(a), None) => Some(a.clone()),
            (None, Some(b)) => Some(b.clone()),
            (Some(a), Some(b)) => {
                let sum = a.as_ref() + b.as_ref();
                if sum.is_zero() {
                    None
                } else {
                    Some(Arc::new(sum))
                }
            }
        };
        Mono { exp, pows }
    }

    /// `self / other` for the power part, if `other` divides `self`.
    /// The exponential factor of `other` must be absent.
    pub fn div(&self, other: &Mono) -> Option<Mono> {
        debug_assert!(other.exp.is_none());
        let mut pows = Vec::with_capacity(self.pows.len());
        let mut j = 0;
        for (a, k) in &self.pows {
            if j < other.pows.len() {
                match other.pows[j].0.cmp(a) {
                    Ordering::Less => return None,
                    Ordering::Equal => {
                        let kk = other.pows[j].1;
                        j += 1;
                        if kk > *k {
                            return None;
                        }
                        if kk < *k {
                            pows.push((a.clone(), k - kk));
                        }
                        continue;
                    }
                    Ordering::Greater => {}
                }
            }
            pows.push((a.clone(), *k));
        }
        if j < other.pows.len() {
            return None;
        }
        Some(Mono {
            exp: self.exp.clone(),
            pows,
        })
    }

    /// Removes `a` from the power product, returning its exponent.
    pub(crate) fn split_off(&self, a: &Atom) -> (u32, Mono) {
        let mut rest = self.clone();
        match rest.pows.binary_search_by(|(b, _)| b.cmp(a)) {
            Ok(i) => {
                let k = rest.pows.remove(i).1;
                (k, rest)
            }
            Err(_) => (0, rest),
        }
    }

    pub(crate) fn without_exp(&self) -> Mono {
        Mono {
            exp: None,
            pows: self.pows.clone(),
        }
    }
}

/// Lexicographic order on power products, larger atoms dominating.
fn lex_cmp(a: &[(Atom, u32)], b: &[(Atom, u32)]) -> Ordering {
    let (mut i, mut j) = (a.len(), b.len());
    loop {
        match (i, j) {
            (0, 0) => return Ordering::Equal,
            (0, _) => return Ordering::Less,
            (_, 0) => return Ordering::Greater,
            _ => {}
        }
        let (x, kx) = &a[i - 1];
        let (y, ky) = &b[j - 1];
        match x.cmp(y) {
            Ordering::Greater => return Ordering::Greater,
            Ordering::Less => return Ordering::Less,
            Ordering::Equal => match kx.cmp(ky) {
                Ordering::Equal => {
                    i -= 1;
                    j -= 1;
                }
                o => return o,
            },
        }
    }
}

/// Term order used for division: exponential key first, then lex.
fn term_cmp(a: &Mono, b: &Mono) -> Ordering {
    a.exp.cmp(&b.exp).then_with(|| lex_cmp(&a.pows, &b.pows))
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Poly {
    pub(crate) terms: BTreeMap<Mono, BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::term(Mono::one(), c)
    }

    pub fn term(m: Mono, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &BigRational)> {
        self.terms.iter()
    }

    pub fn has_exp(&self) -> bool {
        self.terms.keys().any(|m| m.exp.is_some())
    }

    pub(crate) fn add_term(&mut self, m: Mono, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let (big, small) = if self.len() >= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, k: &BigRational) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * k))
                .collect(),
        }
    }

    pub fn mul_term(&self, m: &Mono, k: &BigRational) -> Poly {
        let mut out = Poly::zero();
        for (mm, c) in &self.terms {
            out.add_term(mm.mul(m), c * k);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub(crate) fn leading(&self) -> Option<(&Mono, &BigRational)> {
        self.terms.iter().max_by(|a, b| term_cmp(a.0, b.0))
    }

    /// Divides by the leading rational coefficient.
    pub(crate) fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
        }
    }

    /// Exact division by an exponential-free polynomial; `None` if the
    /// division leaves a remainder.
    pub(crate) fn exact_div(&self, d: &Poly) -> Option<Poly> {
        if let Some(c) = d.as_constant() {
            if c.is_zero() {
                return None;
            }
            return Some(self.scale(&c.recip()));
        }
        let (dm, dc) = d.leading()?;
        let (dm, dc) = (dm.clone(), dc.clone());
        let mut r = self.clone();
        let mut q = Poly::zero();
        while let Some((rm, rc)) = r.leading() {
            let m = rm.div(&dm)?;
            let c = rc / &dc;
            r = r.sub(&d.mul_term(&m, &c));
            q.add_term(m, c);
        }
        Some(q)
    }

    /// Largest atom occurring in any monomial.
    pub(crate) fn max_atom(&self) -> Option<&Atom> {
        self.terms.keys().filter_map(|m| m.pows.last().map(|p| &p.0)).max()
    }

    pub fn degree_in(&self, a: &Atom) -> u32 {
        self.terms.keys().map(|m| m.degree_of(a)).max().unwrap_or(0)
    }

    /// Coefficients with respect to `a`, indexed by degree.
    pub(crate) fn coeffs_in(&self, a: &Atom) -> Vec<Poly> {
        let mut out = vec![Poly::zero(); self.degree_in(a) as usize + 1];
        for (m, c) in &self.terms {
            let (k, rest) = m.split_off(a);
            out[k as usize].add_term(rest, c.clone());
        }
        out
    }

    fn single_term(&self) -> Option<(&Mono, &BigRational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Groups terms by exponential key; each group is returned without the
    /// exponential factor.
    pub(crate) fn exp_groups(&self) -> BTreeMap<Option<Arc<Expr>>, Poly> {
        let mut out: BTreeMap<Option<Arc<Expr>>, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.exp.clone())
                .or_default()
                .add_term(m.without_exp(), c.clone());
        }
        out
    }
}

fn mono_gcd_with(p: &Poly, m: &Mono) -> Poly {
    let mut pows: Vec<(Atom, u32)> = m.pows.clone();
    for tm in p.terms.keys() {
        pows = pows
            .into_iter()
            .filter_map(|(a, k)| {
                let kk = tm.degree_of(&a).min(k);
                (kk > 0).then_some((a, kk))
            })
            .collect();
        if pows.is_empty() {
            break;
        }
    }
    Poly::term(Mono { exp: None, pows }, BigRational::one())
}

/// Greatest common divisor of two exponential-free polynomials, normalized
/// to leading coefficient one.
pub(crate) fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.as_constant().is_some() || b.as_constant().is_some() {
        return Poly::one();
    }
    if let Some((m, _)) = b.single_term() {
        return mono_gcd_with(a, m);
    }
    if let Some((m, _)) = a.single_term() {
        return mono_gcd_with(b, m);
    }
    let v = match (a.max_atom(), b.max_atom()) {
        (Some(x), Some(y)) => x.max(y).clone(),
        _ => return Poly::one(),
    };
    let (da, db) = (a.degree_in(&v), b.degree_in(&v));
    if da == 0 {
        return gcd(a, &content(b, &v));
    }
    if db == 0 {
        return gcd(&content(a, &v), b);
    }
    let ca = content(a, &v);
    let cb = content(b, &v);
    let c = gcd(&ca, &cb);
    let mut p = a.exact_div(&ca).expect("content divides");
    let mut q = b.exact_div(&cb).expect("content divides");
    if p.degree_in(&v) < q.degree_in(&v) {
        std::mem::swap(&mut p, &mut q);
    }
    let g = loop {
        let r = prem(&p, &q, &v);
        if r.is_zero() {
            break q;
        }
        if r.degree_in(&v) == 0 {
            break Poly::one();
        }
        p = q;
        q = primitive_part(&r, &v);
    };
    c.mul(&primitive_part(&g, &v)).monic()
}

fn content(p: &Poly, v: &Atom) -> Poly {
    let mut g = Poly::zero();
    for c in p.coeffs_in(v).into_iter().rev() {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, &c);
        if g.as_constant().is_some() {
            return Poly::one();
        }
    }
    g
}

fn primitive_part(p: &Poly, v: &Atom) -> Poly {
    let c = content(p, v);
    p.exact_div(&c).expect("content divides")
}

fn prem(a: &Poly, b: &Poly, v: &Atom) -> Poly {
    let db = b.degree_in(v);
    let lb = b.coeffs_in(v).pop().unwrap();
    let mut r = a.clone();
    while !r.is_zero() {
        let dr = r.degree_in(v);
        if dr < db {
            break;
        }
        let lr = r.coeffs_in(v).pop().unwrap();
        let shift = Mono::atom(v.clone(), dr - db);
        r = r
            .mul(&lb)
            .sub(&lr.mul(b).mul_term(&shift, &BigRational::one()));
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        crate::fieldlang::parse_expression_free(s).unwrap().num
    }

    #[test]
    fn gcd_of_shared_linear_factor() {
        // (x+y)(x-y) and (x+y)^2
        let a = p("x^2 - y^2");
        let b = p("x^2 + 2*x*y + y^2");
        assert_eq!(gcd(&a, &b), p("x + y"));
    }

    #[test]
    fn gcd_coprime_is_one() {
        assert_eq!(gcd(&p("x + 1"), &p("y + 1")), Poly::one());
    }

    #[test]
    fn exact_div_detects_remainder() {
        assert!(p("x^2 + 1").exact_div(&p("x + 1")).is_none());
        assert_eq!(p("x^2 - 1").exact_div(&p("x + 1")).unwrap(), p("x - 1"));
    }
}
