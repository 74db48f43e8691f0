use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed};

use super::error::SymError;
use super::expr::{Atom, Expr};
use super::poly::{Mono, Poly};
use super::symbol::Symbol;

/// Raw expression tree as written by a user or produced for display.
/// [`normalize`] maps it to the canonical [`Expr`].
#[derive(Clone, Debug, PartialEq)]
pub enum Tree {
    Num(BigRational),
    Sym(Symbol),
    Add(Vec<Tree>),
    Mul(Vec<Tree>),
    Pow(Box<Tree>, i32),
    Exp(Box<Tree>),
    Call {
        name: Arc<str>,
        deriv: Vec<usize>,
        args: Vec<Tree>,
    },
}

/// Canonical form of a tree.
pub fn normalize(t: &Tree) -> Result<Expr, SymError> {
    Ok(match t {
        Tree::Num(q) => Expr::rational(q.clone()),
        Tree::Sym(s) => Expr::symbol(s),
        Tree::Add(xs) => {
            let mut acc = Expr::zero();
            for x in xs {
                acc = &acc + &normalize(x)?;
            }
            acc
        }
        Tree::Mul(xs) => {
            let mut acc = Expr::one();
            for x in xs {
                acc = &acc * &normalize(x)?;
            }
            acc
        }
        Tree::Pow(b, n) => normalize(b)?.powi(*n)?,
        Tree::Exp(a) => Expr::exp(normalize(a)?),
        Tree::Call { name, deriv, args } => {
            let args = args.iter().map(normalize).collect::<Result<Vec<_>, _>>()?;
            Expr::func(name, args, deriv.clone())
        }
    })
}

impl Tree {
    pub fn normalize(&self) -> Result<Expr, SymError> {
        normalize(self)
    }

    fn neg(self) -> Tree {
        Tree::Mul(vec![Tree::Num(-BigRational::one()), self])
    }
}

fn atom_tree(a: &Atom) -> Tree {
    match a {
        Atom::Sym(s) => Tree::Sym(s.clone()),
        Atom::Func(f) => Tree::Call {
            name: f.name.clone(),
            deriv: f.deriv.clone(),
            args: f.args.iter().map(Expr::to_tree).collect(),
        },
    }
}

fn mono_tree(m: &Mono, c: &BigRational) -> Tree {
    let mut factors = Vec::new();
    if !c.is_one() || (m.pows.is_empty() && m.exp.is_none()) {
        factors.push(Tree::Num(c.clone()));
    }
    for (a, k) in &m.pows {
        let t = atom_tree(a);
        factors.push(if *k == 1 {
            t
        } else {
            Tree::Pow(Box::new(t), *k as i32)
        });
    }
    if let Some(e) = &m.exp {
        factors.push(Tree::Exp(Box::new(e.to_tree())));
    }
    if factors.len() == 1 {
        factors.pop().unwrap()
    } else {
        Tree::Mul(factors)
    }
}

fn poly_tree(p: &Poly) -> Tree {
    let mut terms: Vec<Tree> = p.terms().map(|(m, c)| mono_tree(m, c)).collect();
    match terms.len() {
        0 => Tree::Num(BigRational::from_integer(0.into())),
        1 => terms.pop().unwrap(),
        _ => Tree::Add(terms),
    }
}

impl Expr {
    /// Canonical tree; `normalize(&e.to_tree()) == e`.
    pub fn to_tree(&self) -> Tree {
        let n = poly_tree(&self.num);
        if self.den.is_one() {
            return n;
        }
        let d = Tree::Pow(Box::new(poly_tree(&self.den)), -1);
        match n {
            Tree::Num(q) if q.is_one() => d,
            n => Tree::Mul(vec![n, d]),
        }
    }
}

// Precedence levels for rendering.
const P_ADD: u8 = 1;
const P_MUL: u8 = 2;
const P_NEG: u8 = 3;
const P_POW: u8 = 4;
const P_ATOM: u8 = 5;

fn is_negative_leading(t: &Tree) -> bool {
    match t {
        Tree::Num(q) => q.is_negative(),
        Tree::Mul(xs) => xs.first().is_some_and(is_negative_leading),
        _ => false,
    }
}

fn strip_negation(t: &Tree) -> Tree {
    match t {
        Tree::Num(q) => Tree::Num(-q.clone()),
        Tree::Mul(xs) => {
            let mut xs = xs.clone();
            let first = strip_negation(&xs[0]);
            if matches!(&first, Tree::Num(q) if q.is_one()) && xs.len() > 1 {
                xs.remove(0);
            } else {
                xs[0] = first;
            }
            if xs.len() == 1 {
                xs.pop().unwrap()
            } else {
                Tree::Mul(xs)
            }
        }
        other => other.clone().neg(),
    }
}

fn prec(t: &Tree) -> u8 {
    match t {
        Tree::Add(_) => P_ADD,
        Tree::Mul(_) => {
            if is_negative_leading(t) {
                P_NEG
            } else {
                P_MUL
            }
        }
        Tree::Num(q) => {
            if q.is_negative() {
                P_NEG
            } else if !q.is_integer() {
                P_MUL
            } else {
                P_ATOM
            }
        }
        Tree::Pow(_, n) if *n < 0 => P_MUL,
        Tree::Pow(..) => P_POW,
        _ => P_ATOM,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, t: &Tree, min: u8) -> fmt::Result {
    if prec(t) < min {
        write!(f, "(")?;
        write_tree(f, t)?;
        write!(f, ")")
    } else {
        write_tree(f, t)
    }
}

fn write_mul(f: &mut fmt::Formatter<'_>, xs: &[Tree]) -> fmt::Result {
    let mut numer: Vec<&Tree> = Vec::new();
    let mut denom: Vec<Tree> = Vec::new();
    for x in xs {
        match x {
            Tree::Pow(b, n) if *n < 0 => denom.push(if *n == -1 {
                (**b).clone()
            } else {
                Tree::Pow(b.clone(), -n)
            }),
            other => numer.push(other),
        }
    }
    if numer.is_empty() {
        write!(f, "1")?;
    }
    for (i, x) in numer.iter().enumerate() {
        if i > 0 {
            write!(f, "*")?;
        }
        let min = if i == 0 { P_NEG } else { P_POW };
        write_at(f, x, min)?;
    }
    if !denom.is_empty() {
        write!(f, "/")?;
        if denom.len() == 1 {
            write_at(f, &denom[0], P_POW)?;
        } else {
            write!(f, "(")?;
            write_mul(f, &denom)?;
            write!(f, ")")?;
        }
    }
    Ok(())
}

fn write_tree(f: &mut fmt::Formatter<'_>, t: &Tree) -> fmt::Result {
    match t {
        Tree::Num(q) => write!(f, "{}", q),
        Tree::Sym(s) => write!(f, "{}", s),
        Tree::Add(xs) => {
            for (i, x) in xs.iter().enumerate() {
                if i == 0 {
                    write_at(f, x, P_ADD + 1)?;
                } else if is_negative_leading(x) {
                    write!(f, " - ")?;
                    write_at(f, &strip_negation(x), P_ADD + 1)?;
                } else {
                    write!(f, " + ")?;
                    write_at(f, x, P_ADD + 1)?;
                }
            }
            Ok(())
        }
        Tree::Mul(xs) => {
            if let Some(Tree::Num(q)) = xs.first() {
                if -q.clone() == BigRational::one() && xs.len() > 1 {
                    write!(f, "-")?;
                    return write_mul(f, &xs[1..]);
                }
            }
            write_mul(f, xs)
        }
        Tree::Pow(b, n) => {
            if *n < 0 {
                return write_mul(f, std::slice::from_ref(t));
            }
            write_at(f, b, P_ATOM)?;
            write!(f, "^{}", n)
        }
        Tree::Exp(a) => {
            write!(f, "exp(")?;
            write_tree(f, a)?;
            write!(f, ")")
        }
        Tree::Call { name, deriv, args } => {
            write!(f, "{}", name)?;
            if !deriv.is_empty() {
                write!(f, "'[")?;
                for (i, d) in deriv.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{}", d)?;
                }
                write!(f, "]")?;
            }
            write!(f, "(")?;
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write_tree(f, a)?;
            }
            write!(f, ")")
        }
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tree(f, self)
    }
}
