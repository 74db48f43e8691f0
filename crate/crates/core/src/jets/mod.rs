//! Total derivatives and second prolongation of point vector fields, plus
//! the prolongation coefficients used for equivalence generators.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::field::VectorField;
use crate::fieldlang::{jet_name, ChartDecl};
use crate::symcore::{Expr, Symbol};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum JetError {
    #[error("total derivative of `{0}` needs a jet of order above 3")]
    OrderOverflow(String),
    #[error("`{0}` is not an independent coordinate of the chart")]
    NotIndependent(String),
    #[error("chart must declare exactly one dependent coordinate")]
    NoDependent,
    #[error("order-3 jet `{0}` left in a prolongation coefficient")]
    ScratchJetLeft(String),
}

/// Jet bookkeeping for a chart with one dependent coordinate.
#[derive(Clone, Debug)]
pub struct JetSpace {
    indep: Vec<Symbol>,
    dep: Symbol,
    /// Jets of order 0..=3 keyed by sorted multi-index of independent positions.
    by_index: BTreeMap<Vec<usize>, Symbol>,
    index_of: BTreeMap<Symbol, Vec<usize>>,
}

impl JetSpace {
    pub fn new(chart: &ChartDecl) -> Result<JetSpace, JetError> {
        if chart.dependent.len() != 1 {
            return Err(JetError::NoDependent);
        }
        let indep = chart.independent.clone();
        let dep = chart.dependent[0].clone();
        let mut by_index = BTreeMap::new();
        let n = indep.len();
        let mut frontier: Vec<Vec<usize>> = vec![vec![]];
        by_index.insert(vec![], dep.clone());
        for _ in 0..3 {
            let mut next = Vec::new();
            for idx in &frontier {
                let start = idx.last().copied().unwrap_or(0);
                for k in start..n {
                    let mut j = idx.clone();
                    j.push(k);
                    by_index.insert(j.clone(), Symbol::new(&jet_name(&dep, &indep, &j)));
                    next.push(j);
                }
            }
            frontier = next;
        }
        let index_of = by_index.iter().map(|(k, v)| (v.clone(), k.clone())).collect();
        Ok(JetSpace {
            indep,
            dep,
            by_index,
            index_of,
        })
    }

    pub fn standard() -> JetSpace {
        JetSpace::new(&ChartDecl::standard()).expect("standard chart has one dependent")
    }

    pub fn independent(&self) -> &[Symbol] {
        &self.indep
    }

    pub fn dependent(&self) -> &Symbol {
        &self.dep
    }

    fn position(&self, v: &str) -> Result<usize, JetError> {
        self.indep
            .iter()
            .position(|s| s.name() == v)
            .ok_or_else(|| JetError::NotIndependent(v.to_string()))
    }

    /// Jet symbol `u_J` for independent names `along` (empty gives `u`).
    pub fn jet(&self, along: &[&str]) -> Result<Symbol, JetError> {
        let mut idx = along
            .iter()
            .map(|a| self.position(a))
            .collect::<Result<Vec<_>, _>>()?;
        idx.sort_unstable();
        self.by_index
            .get(&idx)
            .cloned()
            .ok_or_else(|| JetError::OrderOverflow(along.join("")))
    }

    /// Jets of order 1 and 2 in chart order.
    pub fn jets_to_order2(&self) -> Vec<Symbol> {
        let mut v: Vec<(&Vec<usize>, &Symbol)> = self
            .by_index
            .iter()
            .filter(|(k, _)| (1..=2).contains(&k.len()))
            .collect();
        v.sort_by_key(|(k, _)| (k.len(), (*k).clone()));
        v.into_iter().map(|(_, s)| s.clone()).collect()
    }

    pub fn order_of(&self, s: &Symbol) -> Option<usize> {
        self.index_of.get(s).map(Vec::len)
    }

    /// `D_v e = ∂_v e + Σ_J u_{Jv} ∂e/∂u_J`, with order-3 jets as scratch
    /// symbols.
    pub fn total_derivative(&self, e: &Expr, v: &str) -> Result<Expr, JetError> {
        let k = self.position(v)?;
        let mut out = e.diff(&self.indep[k]);
        for s in e.symbols() {
            let Some(idx) = self.index_of.get(&s) else { continue };
            let d = e.diff(&s);
            if d.is_zero() {
                continue;
            }
            if idx.len() == 3 {
                return Err(JetError::OrderOverflow(s.name().to_string()));
            }
            let mut j = idx.clone();
            j.push(k);
            j.sort_unstable();
            out = &out + &(&Expr::symbol(&self.by_index[&j]) * &d);
        }
        Ok(out)
    }

    /// Order-3 scratch jets occurring in `e`.
    pub fn scratch_jets(&self, e: &Expr) -> Vec<Symbol> {
        e.symbols()
            .into_iter()
            .filter(|s| self.order_of(s) == Some(3))
            .collect()
    }
}

/// Which rule produces the second-order coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SecondOrderRule {
    /// `φ^{vw} = D_w φ^v − Σ_k u_{vk} D_w ξ^k` for every pair.
    Symmetric,
    /// The nine rows exactly as printed in the source tables of formulas,
    /// kept for auditing.
    Printed,
}

/// A field together with its jet coefficients `φ^J` (|J| = 1, 2) and,
/// for equivalence generators, `μ^t` and `μ^{u_t}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProlongedField {
    pub base: VectorField,
    pub jet_coeffs: BTreeMap<Symbol, Expr>,
    pub mu_t: Option<Expr>,
    pub mu_ut: Option<Expr>,
}

impl ProlongedField {
    pub fn phi(&self, jet: &str) -> Expr {
        self.jet_coeffs
            .get(&Symbol::new(jet))
            .cloned()
            .unwrap_or_else(Expr::zero)
    }

    /// `Σ coeff·∂e/∂z` over base coordinates and jets.
    pub fn apply(&self, e: &Expr) -> Expr {
        let mut out = self.base.apply(e);
        for (s, c) in &self.jet_coeffs {
            let d = e.diff(s);
            if !d.is_zero() {
                out = &out + &(c * &d);
            }
        }
        out
    }
}

fn xi_of(js: &JetSpace, x: &VectorField) -> Vec<Expr> {
    js.indep.iter().map(|s| x.coeff_of(s)).collect()
}

/// First-order coefficient `φ^v = D_v φ − Σ_k u_k D_v ξ^k`.
fn first_order(js: &JetSpace, x: &VectorField, v: usize) -> Result<Expr, JetError> {
    let xi = xi_of(js, x);
    let vn = js.indep[v].name();
    let mut out = js.total_derivative(&x.coeff_of(&js.dep), vn)?;
    for (k, xk) in xi.iter().enumerate() {
        let uk = Expr::symbol(&js.by_index[&vec![k]]);
        out = &out - &(&uk * &js.total_derivative(xk, vn)?);
    }
    Ok(out)
}

fn jet_expr(js: &JetSpace, idx: &[usize]) -> Expr {
    let mut i = idx.to_vec();
    i.sort_unstable();
    Expr::symbol(&js.by_index[&i])
}

/// `D_w φ^a − Σ_k u_{bk} D_c ξ^k`; the symmetric rule has `b = a`, `c = w`.
fn second_order_term(
    js: &JetSpace,
    xi: &[Expr],
    phi_a: &Expr,
    w: usize,
    b: usize,
    c: usize,
) -> Result<Expr, JetError> {
    let mut out = js.total_derivative(phi_a, js.indep[w].name())?;
    for (k, xk) in xi.iter().enumerate() {
        let ubk = jet_expr(js, &[b, k]);
        out = &out - &(&ubk * &js.total_derivative(xk, js.indep[c].name())?);
    }
    Ok(out)
}

/// Second prolongation of a point field (coefficients on the base and
/// dependent coordinates only).
pub fn prolong2(js: &JetSpace, x: &VectorField) -> Result<ProlongedField, JetError> {
    prolong2_with(js, x, SecondOrderRule::Symmetric)
}

pub fn prolong2_with(
    js: &JetSpace,
    x: &VectorField,
    rule: SecondOrderRule,
) -> Result<ProlongedField, JetError> {
    let n = js.indep.len();
    let xi = xi_of(js, x);
    let first: Vec<Expr> = (0..n)
        .map(|v| first_order(js, x, v))
        .collect::<Result<_, _>>()?;
    let mut jet_coeffs = BTreeMap::new();
    for v in 0..n {
        jet_coeffs.insert(js.by_index[&vec![v]].clone(), first[v].clone());
    }
    for v in 0..n {
        for w in v..n {
            let c = match rule {
                SecondOrderRule::Symmetric => second_order_term(js, &xi, &first[v], w, v, w)?,
                SecondOrderRule::Printed => printed_row(js, &xi, &first, v, w)?,
            };
            for s in js.scratch_jets(&c) {
                if rule == SecondOrderRule::Symmetric && x_is_point(js, x) {
                    return Err(JetError::ScratchJetLeft(s.name().to_string()));
                }
            }
            jet_coeffs.insert(js.by_index[&vec![v, w]].clone(), c);
        }
    }
    Ok(ProlongedField {
        base: x.clone(),
        jet_coeffs,
        mu_t: None,
        mu_ut: None,
    })
}

fn x_is_point(js: &JetSpace, x: &VectorField) -> bool {
    x.components()
        .iter()
        .all(|(_, c)| c.symbols().iter().all(|s| js.order_of(s).unwrap_or(0) == 0))
}

/// The printed rows for a chart `(x, y, t)`: the `xt` row repeats the `tt`
/// row and the `yt` row differentiates `φ^t` along `y` while pairing
/// `u_{yk}` with `D_y ξ^k`. Other charts fall back to the symmetric rule.
fn printed_row(
    js: &JetSpace,
    xi: &[Expr],
    first: &[Expr],
    v: usize,
    w: usize,
) -> Result<Expr, JetError> {
    let names: Vec<&str> = js.indep.iter().map(|s| s.name()).collect();
    if names != ["x", "y", "t"] {
        return second_order_term(js, xi, &first[v], w, v, w);
    }
    match (v, w) {
        (0, 2) => second_order_term(js, xi, &first[2], 2, 2, 2),
        (1, 2) => second_order_term(js, xi, &first[2], 1, 1, 1),
        _ => second_order_term(js, xi, &first[v], w, v, w),
    }
}

/// Jet coefficients where the printed rows differ from the symmetric rule,
/// as `(jet, symmetric − printed)`.
pub fn printed_row_differences(
    js: &JetSpace,
    x: &VectorField,
) -> Result<Vec<(Symbol, Expr)>, JetError> {
    let a = prolong2(js, x)?;
    let b = prolong2_with(js, x, SecondOrderRule::Printed)?;
    let mut out = Vec::new();
    for (s, c) in &a.jet_coeffs {
        let d = c - &b.jet_coeffs[s];
        if !d.is_zero() {
            out.push((s.clone(), d));
        }
    }
    Ok(out)
}

/// Names of the derivative atoms of the unknown coefficient function.
#[derive(Clone, Debug)]
pub struct CoefficientFunction {
    /// Name of the unknown function, e.g. `F`.
    pub name: String,
    /// Its arguments in declaration order, e.g. `(x, y, u, u_x, u_y)`.
    pub args: Vec<Symbol>,
}

impl CoefficientFunction {
    pub fn standard() -> CoefficientFunction {
        CoefficientFunction {
            name: "F".into(),
            args: ["x", "y", "u", "u_x", "u_y"].iter().map(|s| Symbol::new(s)).collect(),
        }
    }

    pub fn value(&self) -> Expr {
        Expr::func(
            &self.name,
            self.args.iter().map(Expr::symbol).collect(),
            vec![],
        )
    }

    /// `F_a` for argument name `a`; zero when `a` is not an argument.
    pub fn partial(&self, a: &str) -> Expr {
        match self.args.iter().position(|s| s.name() == a) {
            Some(i) => Expr::func(
                &self.name,
                self.args.iter().map(Expr::symbol).collect(),
                vec![i],
            ),
            None => Expr::zero(),
        }
    }
}

/// `μ^t` and `μ^{u_t}` for a generator with a `μ` slot on the coordinate
/// `f`, using plain partial derivatives in `t` and `u_t`.
pub fn prolong_equivalence(
    js: &JetSpace,
    y: &VectorField,
    func: &CoefficientFunction,
) -> Result<ProlongedField, JetError> {
    let mut pf = prolong2(js, y)?;
    let mu = y.coeff("f");
    let t = Symbol::new("t");
    let ut = js.jet(&["t"])?;
    let slots: Vec<(String, Expr)> = {
        let mut v: Vec<(String, Expr)> = js
            .indep
            .iter()
            .filter(|s| s.name() != "t")
            .map(|s| (s.name().to_string(), y.coeff_of(s)))
            .collect();
        v.push((js.dep.name().to_string(), y.coeff_of(&js.dep)));
        for s in js.indep.iter().filter(|s| s.name() != "t") {
            let j = js.jet(&[s.name()])?;
            v.push((j.name().to_string(), pf.phi(j.name())));
        }
        v
    };
    let build = |by: &Symbol| -> Expr {
        let mut out = mu.diff(by);
        for (arg, c) in &slots {
            let fa = func.partial(arg);
            if fa.is_zero() {
                continue;
            }
            out = &out - &(&fa * &c.diff(by));
        }
        out
    };
    pf.mu_t = Some(build(&t));
    pf.mu_ut = Some(build(&ut));
    Ok(pf)
}
