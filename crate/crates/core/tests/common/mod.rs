#![allow(dead_code)]

use std::sync::Arc;

use lieclass_core::symcore::{Atom, Tree};
use lieclass_core::Symbol;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;

pub const VARS: [&str; 3] = ["x", "y", "z"];

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn leaf(with_funcs: bool) -> BoxedStrategy<Tree> {
    let num = (-4i64..=4).prop_map(|n| Tree::Num(q(n)));
    let sym = (0usize..3).prop_map(|i| Tree::Sym(Symbol::new(VARS[i])));
    if with_funcs {
        let call = (0usize..3).prop_map(|i| Tree::Call {
            name: Arc::from("F"),
            deriv: vec![],
            args: vec![Tree::Sym(Symbol::new(VARS[i]))],
        });
        prop_oneof![2 => num, 4 => sym, 1 => call].boxed()
    } else {
        prop_oneof![1 => num, 2 => sym].boxed()
    }
}

/// Random raw trees: sums, products, small integer powers (possibly
/// negative), exponentials and unary unknown-function calls.
pub fn tree(depth: u32, with_exp: bool, with_funcs: bool) -> impl Strategy<Value = Tree> {
    leaf(with_funcs).prop_recursive(depth, 24, 3, move |inner| {
        let mut cases: Vec<(u32, BoxedStrategy<Tree>)> = vec![
            (3, prop::collection::vec(inner.clone(), 2..4).prop_map(Tree::Add).boxed()),
            (3, prop::collection::vec(inner.clone(), 2..3).prop_map(Tree::Mul).boxed()),
            (
                2,
                (inner.clone(), -2i32..=3)
                    .prop_map(|(b, n)| Tree::Pow(Box::new(b), n))
                    .boxed(),
            ),
        ];
        if with_exp {
            cases.push((1, inner.clone().prop_map(|a| Tree::Exp(Box::new(a))).boxed()));
        }
        if with_funcs {
            cases.push((
                1,
                inner
                    .prop_map(|a| Tree::Call {
                        name: Arc::from("F"),
                        deriv: vec![],
                        args: vec![a],
                    })
                    .boxed(),
            ));
        }
        prop::strategy::Union::new_weighted(cases)
    })
}

/// Concrete stand-in for the unknown function `F` in numeric checks.
pub fn f_value(a: f64) -> f64 {
    1.0 + a - 0.5 * a * a
}

pub fn f_value_q(a: &BigRational) -> BigRational {
    q(1) + a.clone() - a.clone() * a.clone() / q(2)
}

/// Direct evaluation of a raw tree, independent of the canonical form.
/// `None` when a denominator is (nearly) zero.
pub fn eval_tree_f64(t: &Tree, at: &dyn Fn(&str) -> f64) -> Option<f64> {
    Some(match t {
        Tree::Num(c) => c.to_f64()?,
        Tree::Sym(s) => at(s.name()),
        Tree::Add(xs) => xs.iter().map(|x| eval_tree_f64(x, at)).sum::<Option<f64>>()?,
        Tree::Mul(xs) => xs.iter().map(|x| eval_tree_f64(x, at)).product::<Option<f64>>()?,
        Tree::Pow(b, n) => {
            let b = eval_tree_f64(b, at)?;
            if *n < 0 && b.abs() < 1e-3 {
                return None;
            }
            b.powi(*n)
        }
        Tree::Exp(a) => {
            let a = eval_tree_f64(a, at)?;
            if a.abs() > 30.0 {
                return None;
            }
            a.exp()
        }
        Tree::Call { args, .. } => f_value(eval_tree_f64(&args[0], at)?),
    })
}

pub fn eval_tree_q(t: &Tree, at: &dyn Fn(&str) -> BigRational) -> Option<BigRational> {
    Some(match t {
        Tree::Num(c) => c.clone(),
        Tree::Sym(s) => at(s.name()),
        Tree::Add(xs) => {
            let mut acc = q(0);
            for x in xs {
                acc += eval_tree_q(x, at)?;
            }
            acc
        }
        Tree::Mul(xs) => {
            let mut acc = q(1);
            for x in xs {
                acc *= eval_tree_q(x, at)?;
            }
            acc
        }
        Tree::Pow(b, n) => {
            let b = eval_tree_q(b, at)?;
            if *n < 0 {
                if b.is_zero() {
                    return None;
                }
                num_traits::pow(b.recip(), n.unsigned_abs() as usize)
            } else {
                num_traits::pow(b, *n as usize)
            }
        }
        Tree::Exp(_) => return None,
        Tree::Call { args, .. } => f_value_q(&eval_tree_q(&args[0], at)?),
    })
}

/// Environment for [`lieclass_core::Expr::eval_f64`] matching [`eval_tree_f64`].
pub fn atom_env_f64<'a>(at: &'a dyn Fn(&str) -> f64) -> impl Fn(&Atom) -> Option<f64> + 'a {
    move |a: &Atom| match a {
        Atom::Sym(s) => Some(at(s.name())),
        Atom::Func(f) if f.deriv.is_empty() => {
            let env = atom_env_f64(at);
            Some(f_value(f.args[0].eval_f64(&env).ok()?))
        }
        Atom::Func(_) => None,
    }
}

pub fn atom_env_q<'a>(
    at: &'a dyn Fn(&str) -> BigRational,
) -> impl Fn(&Atom) -> Option<BigRational> + 'a {
    move |a: &Atom| match a {
        Atom::Sym(s) => Some(at(s.name())),
        Atom::Func(f) if f.deriv.is_empty() => {
            let env = atom_env_q(at);
            Some(f_value_q(&f.args[0].eval_rational(&env).ok()?))
        }
        Atom::Func(_) => None,
    }
}
