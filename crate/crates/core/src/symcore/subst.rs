use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use super::error::SymError;
use super::expr::{Atom, Expr, FuncAtom};
use super::poly::{Mono, Poly};
use super::symbol::Symbol;

/// A simultaneous substitution. Keys may be symbols, whole atoms, or
/// unknown-function names bound to a body over formal parameters
/// (`F ↦ λ(p₁..pₙ). body`), in which case derivative atoms of `F` become
/// the matching derivatives of the body.
#[derive(Clone, Debug, Default)]
pub struct Substitution {
    symbols: BTreeMap<Symbol, Expr>,
    atoms: BTreeMap<Atom, Expr>,
    functions: BTreeMap<Arc<str>, (Vec<Symbol>, Expr)>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(mut self, s: &str, value: Expr) -> Self {
        self.symbols.insert(Symbol::new(s), value);
        self
    }

    pub fn bind_symbol(mut self, s: Symbol, value: Expr) -> Self {
        self.symbols.insert(s, value);
        self
    }

    pub fn bind_atom(mut self, a: Atom, value: Expr) -> Self {
        match a {
            Atom::Sym(s) => self.symbols.insert(s, value),
            a => self.atoms.insert(a, value),
        };
        self
    }

    pub fn bind_function(mut self, name: &str, params: Vec<Symbol>, body: Expr) -> Self {
        self.functions.insert(Arc::from(name), (params, body));
        self
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty() && self.atoms.is_empty() && self.functions.is_empty()
    }

    /// Rejects bindings whose values lead back to their own key.
    fn check_acyclic(&self) -> Result<(), SymError> {
        let keys: BTreeSet<&Symbol> = self.symbols.keys().collect();
        let edges: BTreeMap<&Symbol, Vec<&Symbol>> = self
            .symbols
            .iter()
            .map(|(k, v)| {
                let syms = v.symbols();
                let next = keys
                    .iter()
                    .copied()
                    .filter(|s| syms.contains(*s))
                    .collect();
                (k, next)
            })
            .collect();
        // Iterative DFS with colors.
        let mut color: BTreeMap<&Symbol, u8> = BTreeMap::new();
        for start in &keys {
            if color.get(start).copied().unwrap_or(0) != 0 {
                continue;
            }
            let mut stack: Vec<(&Symbol, usize)> = vec![(start, 0)];
            color.insert(start, 1);
            while let Some((node, idx)) = stack.pop() {
                let succ = &edges[node];
                if idx < succ.len() {
                    stack.push((node, idx + 1));
                    let n = succ[idx];
                    match color.get(n).copied().unwrap_or(0) {
                        0 => {
                            color.insert(n, 1);
                            stack.push((n, 0));
                        }
                        1 => return Err(SymError::CyclicSubstitution(n.name().to_string())),
                        _ => {}
                    }
                } else {
                    color.insert(node, 2);
                }
            }
        }
        Ok(())
    }

    fn touches_atom(&self, a: &Atom) -> bool {
        match a {
            Atom::Sym(s) => self.symbols.contains_key(s),
            Atom::Func(f) => {
                self.atoms.contains_key(a)
                    || self.functions.contains_key(&f.name)
                    || f.args.iter().any(|e| self.touches(e))
            }
        }
    }

    fn touches_poly(&self, p: &Poly) -> bool {
        p.terms().any(|(m, _)| self.touches_mono(m))
    }

    fn touches_mono(&self, m: &Mono) -> bool {
        m.exp_arg().is_some_and(|e| self.touches(e))
            || m.powers().iter().any(|(a, _)| self.touches_atom(a))
    }

    fn touches(&self, e: &Expr) -> bool {
        self.touches_poly(&e.num) || self.touches_poly(&e.den)
    }

    fn apply_atom(&self, a: &Atom) -> Result<Expr, SymError> {
        if let Some(v) = self.atoms.get(a) {
            return Ok(v.clone());
        }
        match a {
            Atom::Sym(s) => Ok(self
                .symbols
                .get(s)
                .cloned()
                .unwrap_or_else(|| Expr::symbol(s))),
            Atom::Func(f) => {
                let args = f
                    .args
                    .iter()
                    .map(|e| self.apply_inner(e))
                    .collect::<Result<Vec<_>, _>>()?;
                if let Some((params, body)) = self.functions.get(&f.name) {
                    let mut d = body.clone();
                    for &i in &f.deriv {
                        match params.get(i) {
                            Some(p) => d = d.diff(p),
                            None => return Ok(Expr::zero()),
                        }
                    }
                    let mut inner = Substitution::new();
                    for (p, a) in params.iter().zip(args) {
                        inner.symbols.insert(p.clone(), a);
                    }
                    return inner.apply_inner(&d);
                }
                Ok(Expr::atom(Atom::Func(Arc::new(FuncAtom {
                    name: f.name.clone(),
                    deriv: f.deriv.clone(),
                    args,
                }))))
            }
        }
    }

    fn apply_poly(&self, p: &Poly) -> Result<Expr, SymError> {
        let mut kept = Poly::zero();
        let mut out = Expr::zero();
        for (m, c) in p.terms() {
            if !self.touches_mono(m) {
                kept.add_term(m.clone(), c.clone());
                continue;
            }
            let mut t = Expr::rational(c.clone());
            for (a, k) in m.powers() {
                t = &t * &self.apply_atom(a)?.powi(*k as i32)?;
            }
            if let Some(e) = m.exp_arg() {
                t = &t * &Expr::exp(self.apply_inner(e)?);
            }
            out = &out + &t;
        }
        Ok(&Expr::from_poly(kept) + &out)
    }

    fn apply_inner(&self, e: &Expr) -> Result<Expr, SymError> {
        if !self.touches(e) {
            return Ok(e.clone());
        }
        let n = self.apply_poly(&e.num)?;
        if e.den.is_one() {
            return Ok(n);
        }
        let d = self.apply_poly(&e.den)?;
        n.try_div(&d)
    }

    /// Simultaneous substitution followed by normalization.
    pub fn apply(&self, e: &Expr) -> Result<Expr, SymError> {
        self.check_acyclic()?;
        self.apply_inner(e)
    }
}

impl Expr {
    pub fn substitute(&self, s: &Substitution) -> Result<Expr, SymError> {
        s.apply(self)
    }

    /// Convenience for a single symbol binding.
    pub fn subs(&self, name: &str, value: &Expr) -> Result<Expr, SymError> {
        Substitution::new().bind(name, value.clone()).apply(self)
    }
}
