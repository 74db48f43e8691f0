use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::error::SymError;
use super::poly::{gcd, Mono, Poly};
use super::symbol::Symbol;

/// An indeterminate of the polynomial ring: a symbol or an application of
/// an unknown function (possibly differentiated).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Atom {
    Sym(Symbol),
    Func(Arc<FuncAtom>),
}

/// `name^{(deriv)}(args)`. The derivative multi-index lists argument
/// positions and is kept sorted, so mixed partials compare equal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FuncAtom {
    pub name: Arc<str>,
    pub deriv: Vec<usize>,
    pub args: Vec<Expr>,
}

impl FuncAtom {
    pub fn differentiated(&self, position: usize) -> FuncAtom {
        let mut deriv = self.deriv.clone();
        let at = deriv.partition_point(|&p| p <= position);
        deriv.insert(at, position);
        FuncAtom {
            name: self.name.clone(),
            deriv,
            args: self.args.clone(),
        }
    }
}

impl Atom {
    pub fn sym(name: &str) -> Atom {
        Atom::Sym(Symbol::new(name))
    }

    pub fn as_symbol(&self) -> Option<&Symbol> {
        match self {
            Atom::Sym(s) => Some(s),
            Atom::Func(_) => None,
        }
    }

    pub fn as_func(&self) -> Option<&FuncAtom> {
        match self {
            Atom::Sym(_) => None,
            Atom::Func(f) => Some(f),
        }
    }

    pub fn contains_symbol(&self, v: &Symbol) -> bool {
        match self {
            Atom::Sym(s) => s == v,
            Atom::Func(f) => f.args.iter().any(|a| a.contains_symbol(v)),
        }
    }

    fn diff(&self, v: &Symbol) -> Expr {
        match self {
            Atom::Sym(s) => {
                if s == v {
                    Expr::one()
                } else {
                    Expr::zero()
                }
            }
            Atom::Func(f) => {
                let mut out = Expr::zero();
                for (i, arg) in f.args.iter().enumerate() {
                    let d = arg.diff(v);
                    if d.is_zero() {
                        continue;
                    }
                    let atom = Expr::atom(Atom::Func(Arc::new(f.differentiated(i))));
                    out = &out + &(&atom * &d);
                }
                out
            }
        }
    }
}

/// Canonical exact expression: a reduced fraction of polynomials whose
/// denominator is free of exponentials and has leading coefficient one.
///
/// Every constructor and arithmetic operation returns the canonical form,
/// so structural equality is mathematical equality within the supported
/// class.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Expr {
    pub(crate) num: Poly,
    pub(crate) den: Poly,
}

impl Default for Expr {
    fn default() -> Self {
        Expr::zero()
    }
}

impl Expr {
    pub fn zero() -> Expr {
        Expr {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn int(n: i64) -> Expr {
        Expr::rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(n: i64, d: i64) -> Expr {
        Expr::rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn rational(q: BigRational) -> Expr {
        Expr {
            num: Poly::constant(q),
            den: Poly::one(),
        }
    }

    pub fn sym(name: &str) -> Expr {
        Expr::atom(Atom::sym(name))
    }

    pub fn symbol(s: &Symbol) -> Expr {
        Expr::atom(Atom::Sym(s.clone()))
    }

    pub fn atom(a: Atom) -> Expr {
        Expr {
            num: Poly::term(Mono::atom(a, 1), BigRational::one()),
            den: Poly::one(),
        }
    }

    /// Application of an unknown function, optionally differentiated.
    pub fn func(name: &str, args: Vec<Expr>, mut deriv: Vec<usize>) -> Expr {
        deriv.sort_unstable();
        Expr::atom(Atom::Func(Arc::new(FuncAtom {
            name: Arc::from(name),
            deriv,
            args,
        })))
    }

    pub fn exp(arg: Expr) -> Expr {
        Expr {
            num: Poly::term(Mono::exponential(arg), BigRational::one()),
            den: Poly::one(),
        }
    }

    /// Builds `num / den` in canonical form.
    pub fn from_parts(num: Poly, den: Poly) -> Result<Expr, SymError> {
        if den.is_zero() {
            return Err(SymError::DegenerateDivision);
        }
        if num.is_zero() {
            return Ok(Expr::zero());
        }
        let (mut num, mut den) = (num, den);
        if den.has_exp() {
            let groups = den.exp_groups();
            if groups.len() > 1 {
                return Err(SymError::UnsupportedDenominator(
                    Expr::from_poly(den).to_string(),
                ));
            }
            let (key, plain) = groups.into_iter().next().unwrap();
            let key = key.expect("has_exp implies a key");
            num = num.mul_term(&Mono::exponential(-key.as_ref()), &BigRational::one());
            den = plain;
        }
        if let Some(c) = den.as_constant() {
            return Ok(Expr {
                num: num.scale(&c.recip()),
                den: Poly::one(),
            });
        }
        let mut g = den.clone();
        for part in num.exp_groups().values() {
            g = gcd(&g, part);
            if g.as_constant().is_some() {
                break;
            }
        }
        if g.as_constant().is_none() {
            num = num.exact_div(&g).expect("gcd divides numerator");
            den = den.exact_div(&g).expect("gcd divides denominator");
        }
        let lc = den.leading().map(|(_, c)| c.recip()).unwrap();
        Ok(Expr {
            num: num.scale(&lc),
            den: den.scale(&lc),
        })
    }

    pub(crate) fn from_poly(p: Poly) -> Expr {
        Expr {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational()
            .filter(|q| q.is_integer())
            .map(|q| q.to_integer())
    }

    pub fn as_atom(&self) -> Option<&Atom> {
        if !self.den.is_one() || self.num.len() != 1 {
            return None;
        }
        let (m, c) = self.num.terms().next()?;
        if !c.is_one() || m.exp.is_some() || m.pows.len() != 1 || m.pows[0].1 != 1 {
            return None;
        }
        Some(&m.pows[0].0)
    }

    pub fn as_symbol(&self) -> Option<&Symbol> {
        self.as_atom().and_then(Atom::as_symbol)
    }

    pub fn try_div(&self, other: &Expr) -> Result<Expr, SymError> {
        if other.is_zero() {
            return Err(SymError::DegenerateDivision);
        }
        if let Some(c) = other.as_rational() {
            return Ok(self.scale(&c.recip()));
        }
        Expr::from_parts(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn recip(&self) -> Result<Expr, SymError> {
        Expr::one().try_div(self)
    }

    pub fn scale(&self, k: &BigRational) -> Expr {
        Expr {
            num: self.num.scale(k),
            den: if k.is_zero() {
                Poly::one()
            } else {
                self.den.clone()
            },
        }
    }

    pub fn powi(&self, n: i32) -> Result<Expr, SymError> {
        if n < 0 {
            if self.is_zero() {
                return Err(SymError::ZeroToNegativePower);
            }
            return self.recip()?.powi(-n);
        }
        // Powers of coprime parts stay coprime; the exponential factor of a
        // numerator power is absorbed by Mono::mul.
        Ok(Expr {
            num: self.num.pow(n as u32),
            den: self.den.pow(n as u32),
        })
    }

    /// True if `v` occurs anywhere, including inside function arguments and
    /// exponential keys.
    pub fn contains_symbol(&self, v: &Symbol) -> bool {
        poly_contains(&self.num, v) || poly_contains(&self.den, v)
    }

    /// Exact partial derivative with respect to `v`.
    pub fn diff(&self, v: &Symbol) -> Expr {
        if !self.contains_symbol(v) {
            return Expr::zero();
        }
        let dn = poly_diff(&self.num, v);
        if self.den.is_one() {
            return dn;
        }
        let dd = poly_diff(&self.den, v);
        let den = Expr::from_poly(self.den.clone());
        let num = Expr::from_poly(self.num.clone());
        let top = &(&dn * &den) - &(&num * &dd);
        top.try_div(&den.powi(2).expect("nonnegative power"))
            .expect("denominator is nonzero")
    }

    pub fn diff_n(&self, v: &Symbol, n: usize) -> Expr {
        (0..n).fold(self.clone(), |e, _| e.diff(v))
    }

    /// All atoms occurring at the top level of the numerator and denominator.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        for p in [&self.num, &self.den] {
            for (m, _) in p.terms() {
                out.extend(m.pows.iter().map(|(a, _)| a.clone()));
            }
        }
        out
    }

    /// All symbols occurring anywhere in the expression.
    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        collect_symbols_poly(&self.num, &mut out);
        collect_symbols_poly(&self.den, &mut out);
        out
    }

    /// All function atoms occurring anywhere (including nested).
    pub fn func_atoms(&self) -> BTreeSet<Arc<FuncAtom>> {
        let mut out = BTreeSet::new();
        collect_funcs_poly(&self.num, &mut out);
        collect_funcs_poly(&self.den, &mut out);
        out
    }

    pub fn has_exp(&self) -> bool {
        self.num.has_exp()
    }
}

fn collect_symbols_poly(p: &Poly, out: &mut BTreeSet<Symbol>) {
    for (m, _) in p.terms() {
        if let Some(e) = m.exp_arg() {
            out.extend(e.symbols());
        }
        for (a, _) in m.powers() {
            match a {
                Atom::Sym(s) => {
                    out.insert(s.clone());
                }
                Atom::Func(f) => {
                    for arg in &f.args {
                        out.extend(arg.symbols());
                    }
                }
            }
        }
    }
}

fn collect_funcs_poly(p: &Poly, out: &mut BTreeSet<Arc<FuncAtom>>) {
    for (m, _) in p.terms() {
        if let Some(e) = m.exp_arg() {
            out.extend(e.func_atoms());
        }
        for (a, _) in m.powers() {
            if let Atom::Func(f) = a {
                out.insert(f.clone());
                for arg in &f.args {
                    out.extend(arg.func_atoms());
                }
            }
        }
    }
}

fn poly_contains(p: &Poly, v: &Symbol) -> bool {
    p.terms().any(|(m, _)| {
        m.exp_arg().is_some_and(|e| e.contains_symbol(v))
            || m.powers().iter().any(|(a, _)| a.contains_symbol(v))
    })
}

fn mono_expr(m: &Mono, c: &BigRational) -> Expr {
    Expr::from_poly(Poly::term(m.clone(), c.clone()))
}

fn poly_diff(p: &Poly, v: &Symbol) -> Expr {
    let mut acc = Poly::zero();
    let mut rest_acc = Expr::zero();
    for (m, c) in p.terms() {
        for (i, (a, k)) in m.pows.iter().enumerate() {
            if !a.contains_symbol(v) {
                continue;
            }
            let mut lowered = m.clone();
            if *k == 1 {
                lowered.pows.remove(i);
            } else {
                lowered.pows[i].1 -= 1;
            }
            let coeff = c * BigRational::from_integer(BigInt::from(*k));
            match a {
                Atom::Sym(_) => {
                    acc = acc.add(&Poly::term(lowered, coeff));
                }
                Atom::Func(_) => {
                    let d = a.diff(v);
                    rest_acc = &rest_acc + &(&mono_expr(&lowered, &coeff) * &d);
                }
            }
        }
        if let Some(e) = m.exp_arg() {
            let d = e.diff(v);
            if !d.is_zero() {
                rest_acc = &rest_acc + &(&mono_expr(m, c) * &d);
            }
        }
    }
    &Expr::from_poly(acc) + &rest_acc
}

impl Add for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Expr::from_poly(self.num.add(&rhs.num));
        }
        if self.den == rhs.den {
            return Expr::from_parts(self.num.add(&rhs.num), self.den.clone())
                .expect("nonzero denominator");
        }
        Expr::from_parts(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
        .expect("nonzero denominator")
    }
}

impl Sub for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        self + &(-rhs)
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl Mul for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        if self.is_zero() || rhs.is_zero() {
            return Expr::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Expr::from_poly(self.num.mul(&rhs.num));
        }
        Expr::from_parts(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
            .expect("nonzero denominator")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: &Expr) -> Expr {
                (&self).$m(rhs)
            }
        }
        impl $tr<Expr> for &Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

impl std::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        iter.fold(Expr::zero(), |a, b| &a + &b)
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_tree())
    }
}
